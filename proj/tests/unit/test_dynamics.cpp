#include <doctest.h>

#include <cmath>

#include "qheat/dynamics.hpp"
#include "qheat/error.hpp"
#include "qheat/random.hpp"

using namespace qheat;
using namespace qheat::dynamics;
using doctest::Approx;

namespace {

double energy(const CMatrix& rho) { return trace_product(rho, pair::hamiltonian().matrix()).real(); }

CMatrix ket_projector(const CMatrix& v) { return v * v.adjoint(); }

// Largest deviation between two trajectories on the same grid.
double distance(const Trajectory& a, const Trajectory& b) {
  REQUIRE(a.states.size() == b.states.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    d = std::max(d, max_abs(a.states[i].matrix() - b.states[i].matrix()));
  }
  return d;
}

}  // namespace

TEST_CASE("population rates") {
  const PairRates r = pair_population_rates(make_bath(4.0));
  CHECK(r.g_plus == 1.0);
  CHECK(r.g_minus == Approx(std::exp(-4.0)));
  CHECK(r.a_plus == Approx(-3.53192142).epsilon(1e-8));
  CHECK(r.a_minus == Approx(-4.61460369).epsilon(1e-8));
}

TEST_CASE("generator structure") {
  const auto gen = pair_generator(make_bath(1.0, 0.5));
  CHECK(gen.dim() == 4);
  REQUIRE(gen.channels().size() == 2);
  CHECK(gen.channels()[0].rate == 0.5);
  CHECK(gen.channels()[1].rate == Approx(0.5 * std::exp(-1.0)));
  CHECK(max_abs(gen.channels()[0].op - pair::collective_lowering()) < 1e-15);

  const auto ind = pair_generator(make_bath(1.0), CouplingMode::independent);
  CHECK(ind.channels().size() == 4);
  CHECK(ind.mode() == CouplingMode::independent);

  const HermitianObservable zero(CMatrix::Zero(4, 4));
  CHECK(GeneratorSpec(zero, pair::collective_lowering(), 1.0, 0.0).channels().size() == 1);
  CHECK_THROWS_AS(GeneratorSpec(zero, pair::collective_lowering(), 0.0, 0.1), InvalidInput);
  CHECK_THROWS_AS(GeneratorSpec(zero, pair::collective_lowering(), 1.0, -0.1), InvalidInput);
  CHECK_THROWS_AS(GeneratorSpec(zero, pair::collective_lowering(), NAN, 0.1), InvalidInput);
  CHECK_THROWS_AS(GeneratorSpec(zero, CMatrix::Zero(4, 3), 1.0, 0.1), DimensionError);
  CHECK_THROWS_AS(GeneratorSpec(zero, pair::local_lowering(), 1.0, 0.1), DimensionError);
  CHECK_THROWS_AS(GeneratorSpec(zero, pair::local_lowering(), 1.0, 0.1, CouplingMode::independent), InvalidInput);
  CHECK_THROWS_AS(GeneratorSpec(zero, pair::local_lowering(), 1.0, 0.1, CouplingMode::independent, {2, 3}),
                  DimensionError);
}

TEST_CASE("right-hand side is traceless and Hermitian") {
  random::Engine rng(61);
  for (auto mode : {CouplingMode::collective, CouplingMode::independent}) {
    const auto gen = pair_generator(make_bath(-0.7, 1.3), mode, {0.4, 0.2});
    for (int i = 0; i < 50; ++i) {
      const DensityOperator rho = random::density(rng, 4, {2, 2});
      const CMatrix d = lindblad_rhs(rho, gen);
      CHECK(std::abs(d.trace()) < 1e-14);
      CHECK(hermiticity_defect(d) < 1e-14);
    }
  }
  CHECK_THROWS_AS(lindblad_rhs(CMatrix(identity(2) / 2.0), pair_generator(make_bath(1.0))), DimensionError);
}

TEST_CASE("steady states are fixed points") {
  const double bb = 1.7;
  const auto collective = pair_generator(make_bath(bb));
  for (double r : {0.2, 0.9, 1.0}) {
    CHECK(max_abs(lindblad_rhs(pair::steady_state(bb, r), collective)) < 1e-15);
  }
  const DensityOperator tau(kron(pair::thermal_tls(bb), pair::thermal_tls(bb)), pair::layout());
  CHECK(max_abs(lindblad_rhs(tau, pair_generator(make_bath(bb), CouplingMode::independent))) < 1e-15);
  const DensityOperator dark(ket_projector(pair::collective_basis().col(pair::kPsiMinus)), pair::layout());
  CHECK(max_abs(lindblad_rhs(dark, collective)) < 1e-15);
}

TEST_CASE("grids") {
  const auto g = uniform_grid(3.0, 60);
  REQUIRE(g.size() == 61);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 3.0);
  CHECK(g[20] == Approx(1.0));
  CHECK_THROWS_AS(uniform_grid(0.0, 10), InvalidInput);
  CHECK_THROWS_AS(uniform_grid(1.0, 0), InvalidInput);
  CHECK_THROWS_AS(uniform_grid(INFINITY, 10), InvalidInput);

  const auto rho = pair::initial_state({3.5, {0.0, 0.0}});
  const auto gen = pair_generator(make_bath(4.0));
  CHECK_THROWS_AS(integrate(rho, gen, {}), InvalidInput);
  CHECK_THROWS_AS(integrate(rho, gen, {0.1, 0.2}), InvalidInput);
  CHECK_THROWS_AS(integrate(rho, gen, {0.0, 1.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(integrate(rho, gen, {0.0, 1.0, NAN}), InvalidInput);
  CHECK_THROWS_AS(integrate(rho, gen, {0.0, 1.0}, 0.0), InvalidInput);
  CHECK_THROWS_AS(integrate(DensityOperator(identity(2) / 2.0), gen, {0.0, 1.0}), DimensionError);
  CHECK(integrate(rho, gen, {0.0}).states.size() == 1);
}

TEST_CASE("analytic solution matches the integrator") {
  const auto grid = uniform_grid(3.0, 30);
  for (double a : {-0.028453, -0.02, 0.0, 0.015, 0.028453}) {
    const PairConfig cfg{3.5, {a, 0.0}};
    const auto bath = make_bath(4.0);
    const auto exact = analytic_pair_trajectory(cfg, bath, grid);
    const auto ode = integrate(pair::initial_state(cfg), pair_generator(bath), grid);
    CHECK(distance(exact, ode) < 1e-9);
  }
}

TEST_CASE("analytic solution of arbitrary states, baths and interaction terms") {
  random::Engine rng(67);
  const auto grid = uniform_grid(2.0, 8);
  for (int i = 0; i < 10; ++i) {
    const auto bath = make_bath(-2.0 + 0.6 * i, 0.5 + 0.1 * i);
    const PairHamiltonian h{0.3 * i, -0.2 * i};
    const DensityOperator rho0 = random::density(rng, 4, {2, 2});
    const auto ode = integrate(rho0, pair_generator(bath, CouplingMode::collective, h), grid);
    const auto rates = pair_population_rates(bath);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(max_abs(analytic_pair_state(rho0.matrix(), rates, grid[k], h) - ode.states[k].matrix()) < 1e-9);
    }
  }
}

TEST_CASE("reference energies") {
  const auto grid = uniform_grid(3.0, 60);
  const auto traj = analytic_pair_trajectory({3.5, {-0.02, 0.0}}, make_bath(4.0), grid);
  CHECK(energy(traj.states.front().matrix()) == Approx(0.0586244615027126).epsilon(1e-13));
  CHECK(energy(traj.states.back().matrix()) == Approx(0.066188776075635).epsilon(1e-11));

  const auto ind = independent_pair_trajectory({3.5, {-0.02, 0.0}}, make_bath(4.0), {0.0, 3.0, 40.0});
  CHECK(energy(ind.states.back().matrix()) == Approx(0.0359724199241826).epsilon(1e-12));
}

TEST_CASE("independent closed form matches the integrator") {
  const auto grid = uniform_grid(3.0, 30);
  for (double bb : {-1.0, 0.5, 4.0}) {
    const PairConfig cfg{3.5, {-0.02, 0.01}};
    const auto bath = make_bath(bb, 0.8);
    const auto exact = independent_pair_trajectory(cfg, bath, grid);
    const auto ode = integrate(pair::initial_state(cfg), pair_generator(bath, CouplingMode::independent), grid);
    CHECK(distance(exact, ode) < 1e-9);
  }
}

TEST_CASE("long-time collective state is the predicted steady state") {
  const PairConfig cfg{3.5, {-0.02, 0.0}};
  const auto expected = pair::steady_state(4.0, pair::r_constant(cfg));
  // At the default tolerance the per-step error keeps the residual near 1e-11.
  const auto res = integrate_to_steady(pair::initial_state(cfg), pair_generator(make_bath(4.0)));
  CHECK(max_abs(res.state - expected.matrix()) < 1e-8);
  CHECK(energy(res.state) == Approx(pair::steady_energy(3.5, 4.0, -0.02)).epsilon(1e-8));

  const auto fine = integrate_to_steady(pair::initial_state(cfg), pair_generator(make_bath(4.0)), 1e-13);
  CHECK(fine.criterion == SteadyCriterion::derivative);
  CHECK(fine.residual < 1e-12);
  CHECK(fine.time < 50.0);
  CHECK(max_abs(fine.state - expected.matrix()) < 1e-11);

  const auto late = analytic_pair_trajectory(cfg, make_bath(4.0), {0.0, 60.0});
  CHECK(max_abs(late.states.back().matrix() - expected.matrix()) < 1e-12);
}

TEST_CASE("steady search reports the time limit for a persistent oscillation") {
  // With G- = 0, psi0 and psi- are both dark and their coherence rotates forever.
  const HermitianObservable h(PairHamiltonian{0.5, 0.0}.matrix());
  const GeneratorSpec gen(h, pair::collective_lowering(), 1.0, 0.0);
  const CMatrix v = (pair::collective_basis().col(pair::kPsi0) + pair::collective_basis().col(pair::kPsiMinus)) /
                    std::sqrt(2.0);
  const auto res = integrate_to_steady(DensityOperator(ket_projector(v), pair::layout()), gen);
  CHECK(res.criterion == SteadyCriterion::time_limit);
  CHECK(res.time == Approx(50.0));
  CHECK(res.residual > 1e-3);
}

TEST_CASE("zero-temperature cascade from the doubly excited state") {
  const HermitianObservable zero(CMatrix::Zero(4, 4));
  const GeneratorSpec gen(zero, pair::collective_lowering(), 1.0, 0.0);
  const DensityOperator top(ket_projector(pair::collective_basis().col(pair::kPsi1)), pair::layout());
  const auto grid = uniform_grid(2.0, 10);
  const auto traj = integrate(top, gen, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const auto p = pair::collective_populations(traj.states[k].matrix());
    CHECK(std::abs(p[pair::kPsi1] - (std::exp(-4 * t))) < 1e-9);
    CHECK(std::abs(p[pair::kPsiPlus] - (4 * t * std::exp(-4 * t))) < 1e-9);
    CHECK(std::abs(p[pair::kPsi0] - (1 - (1 + 4 * t) * std::exp(-4 * t))) < 1e-9);
  }
  PairRates rates = pair_population_rates(make_bath(4.0));
  rates.g_minus = 0.0;
  CHECK_THROWS_AS(analytic_pair_state(top.matrix(), rates, 1.0), InvalidInput);
}

TEST_CASE("imaginary part of alpha does not change populations or energy") {
  const auto grid = uniform_grid(3.0, 12);
  const auto bath = make_bath(4.0);
  const auto re = analytic_pair_trajectory({3.5, {-0.015, 0.0}}, bath, grid);
  const auto cx = analytic_pair_trajectory({3.5, {-0.015, 0.02}}, bath, grid);
  const auto cx_ode = integrate(pair::initial_state({3.5, {-0.015, 0.02}}), pair_generator(bath), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto a = pair::collective_populations(re.states[k].matrix());
    const auto b = pair::collective_populations(cx.states[k].matrix());
    const auto c = pair::collective_populations(cx_ode.states[k].matrix());
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(a[i] - b[i]) < 1e-15);
      CHECK(std::abs(a[i] - c[i]) < 1e-9);
    }
  }
}

TEST_CASE("Lamb shift and exchange leave populations untouched") {
  const auto grid = uniform_grid(3.0, 12);
  const auto bath = make_bath(2.0);
  const PairConfig cfg{1.0, {0.05, 0.1}};
  const auto plain = analytic_pair_trajectory(cfg, bath, grid);
  const auto shifted = analytic_pair_trajectory(cfg, bath, grid, {0.7, -1.3});
  const auto ode = integrate(pair::initial_state(cfg), pair_generator(bath, CouplingMode::collective, {0.7, -1.3}),
                             grid);
  CHECK(distance(shifted, ode) < 1e-9);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto a = pair::collective_populations(plain.states[k].matrix());
    const auto b = pair::collective_populations(shifted.states[k].matrix());
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-14);
  }
}

TEST_CASE("integrator instability is reported") {
  // No step can reach a local error estimate below rounding.
  const auto rho = pair::initial_state({1.0, {0.1, 0.0}});
  CHECK_THROWS_AS(integrate(rho, pair_generator(make_bath(0.5)), {0.0, 1.0}, 1e-30), IntegrationUnstable);
}

TEST_CASE("trajectory observables") {
  const double bs = 3.5;
  const double bb = 4.0;
  const auto grid = uniform_grid(3.0, 30);
  const auto traj = analytic_pair_trajectory({bs, {-0.02, 0.0}}, make_bath(bb), grid);
  const auto recs = trajectory_observables(traj, bs, bb);
  REQUIRE(recs.size() == grid.size());
  CHECK(recs[0].t == 0.0);
  CHECK(recs[0].e_over_omega == Approx(0.0586244615027126).epsilon(1e-13));
  CHECK(recs[0].relent_s1 == 0.0);
  CHECK(recs.back().e_over_omega == Approx(0.066188776075635).epsilon(1e-11));
  for (const auto& r : recs) {
    CHECK(r.identity_residual < 1e-10);
    CHECK(r.p0 + r.pplus + r.pminus + r.p1 == Approx(1.0).epsilon(1e-13));
    CHECK(r.relent_s1 >= -1e-15);
    CHECK(r.s_s1 == Approx(r.s_s2).epsilon(1e-12));
    CHECK(r.i_s1s2 == Approx(r.s_s1 + r.s_s2 - r.s_s).epsilon(1e-12));
    CHECK(std::isfinite(r.beta_app_omega));
  }
  Trajectory single{{0.0}, {DensityOperator(identity(2) / 2.0)}};
  CHECK_THROWS_AS(trajectory_observables(single, bs, bb), DimensionError);
}

TEST_CASE("default solver is the analytic trajectory") {
  const auto grid = uniform_grid(1.0, 4);
  const PairConfig cfg{3.5, {0.01, 0.0}};
  const auto a = default_analytic_solver()(cfg, make_bath(4.0), grid);
  const auto b = analytic_pair_trajectory(cfg, make_bath(4.0), grid);
  CHECK(distance(a, b) == 0.0);
}
