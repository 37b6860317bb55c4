#include "qheat/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>

#include "qheat/error.hpp"
#include "qheat/pairtls.hpp"
#include "qheat/random.hpp"
#include "qheat/reversal.hpp"
#include "qheat/thermo.hpp"

namespace qheat::verify {
namespace {

using dynamics::Trajectory;

constexpr double kBetaS = 3.5;
constexpr double kBetaB = 4.0;
constexpr double kTimeSpan = 3.0;
constexpr std::size_t kGridSteps = 60;
constexpr double kFig1Alphas[] = {-0.028453, -0.02, 0.0, 0.015, 0.028453};

// Reference values from an independent full-Liouvillian computation.
constexpr double kRefInitialEnergy = 0.0586244615027126;
constexpr double kRefPermanentEndpoint = 0.07448428423333076;
constexpr double kRefAlphaCritical = -0.011748648091970581;
constexpr double kRefAlphaPermanent = -0.012291952678192941;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Outcome {
  double observed = 0.0;
  bool pass = false;
};

double energy(const CMatrix& rho) { return trace_product(pair::hamiltonian().matrix(), rho).real(); }

template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw InvalidInput("bisection bracket has no sign change");
  for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Shared, lazily built inputs.
class Context {
 public:
  explicit Context(const Options& opts) : opts_(opts) {}

  const BathSpec& bath() const { return bath_; }

  struct Fig1 {
    std::vector<Trajectory> analytic;
    std::vector<Trajectory> ode;
    double seconds = 0.0;
  };

  const Fig1& fig1() {
    if (!fig1_) {
      Fig1 f;
      const auto grid = dynamics::uniform_grid(kTimeSpan, kGridSteps);
      const auto gen = dynamics::pair_generator(bath_);
      const auto start = std::chrono::steady_clock::now();
      for (double a : kFig1Alphas) {
        const pair::PairConfig cfg{kBetaS, {a, 0.0}};
        f.analytic.push_back(opts_.analytic_solver(cfg, bath_, grid));
        f.ode.push_back(dynamics::integrate(pair::initial_state(cfg), gen, grid));
      }
      f.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      fig1_ = std::move(f);
    }
    return *fig1_;
  }

 private:
  const Options& opts_;
  BathSpec bath_ = make_bath(kBetaB);
  std::optional<Fig1> fig1_;
};

struct Spec {
  const char* id;
  int criterion;
  const char* description;
  const char* bound;
  std::function<Outcome(Context&)> fn;
};

Outcome at_most(double v, double tol) { return {v, v <= tol}; }

Outcome analytic_vs_ode(Context& ctx) {
  const auto& f = ctx.fig1();
  double worst = 0.0;
  for (std::size_t k = 0; k < f.ode.size(); ++k) {
    if (f.analytic[k].states.size() != f.ode[k].states.size()) return {kNaN, false};
    for (std::size_t i = 0; i < f.ode[k].states.size(); ++i) {
      worst = std::max(worst, max_abs(f.analytic[k].states[i].matrix() - f.ode[k].states[i].matrix()));
    }
  }
  return at_most(worst, 1e-8);
}

Outcome runtime(Context& ctx) {
  const double s = ctx.fig1().seconds;
  return {s, s < 5.0};
}

Outcome initial_energy(Context& ctx) {
  double worst = 0.0;
  for (const auto& traj : ctx.fig1().analytic) {
    worst = std::max(worst, std::abs(energy(traj.states.front().matrix()) - kRefInitialEnergy));
  }
  return at_most(worst, 1e-12);
}

double numeric_steady_energy(const pair::PairConfig& cfg, const BathSpec& bath) {
  const auto res = dynamics::integrate_to_steady(pair::initial_state(cfg), dynamics::pair_generator(bath));
  return energy(res.state);
}

Outcome steady_energy(Context& ctx) {
  double worst = 0.0;
  for (double a : kFig1Alphas) {
    const double e = numeric_steady_energy({kBetaS, {a, 0.0}}, ctx.bath());
    worst = std::max(worst, std::abs(e - pair::steady_energy(kBetaS, kBetaB, a)));
  }
  return at_most(worst, 1e-10);
}

Outcome permanent_endpoint(Context& ctx) {
  const double e = numeric_steady_energy({kBetaS, {kFig1Alphas[0], 0.0}}, ctx.bath());
  return {e, std::abs(e - kRefPermanentEndpoint) <= 1e-10 && e > kRefInitialEnergy};
}

Outcome alpha_c_bisection(Context& ctx) {
  const auto& ladder = pair::collective_ladder();
  const double amax = pair::alpha_max(kBetaS);
  const double root = bisect(
      [&](double a) { return heat_current(pair::initial_state({kBetaS, {a, 0.0}}), ladder, ctx.bath()); }, -amax,
      amax);
  const double closed = reversal::alpha_critical(kBetaS, kBetaB);
  const double d = std::abs(root - closed);
  return {d, d <= 1e-9 && std::abs(closed - kRefAlphaCritical) <= 1e-12};
}

Outcome alpha_p_root(Context&) {
  const double amax = pair::alpha_max(kBetaS);
  const double e0 = energy(pair::initial_state({kBetaS, {0.0, 0.0}}).matrix());
  const double root = bisect(
      [&](double a) {
        const double r = pair::r_constant({kBetaS, {a, 0.0}});
        return energy(pair::steady_state(kBetaB, r).matrix()) - e0;
      },
      -amax, amax);
  const double closed = reversal::alpha_permanent(kBetaS, kBetaB);
  const double d = std::abs(root - closed);
  return {d, d <= 1e-9 && std::abs(closed - kRefAlphaPermanent) <= 1e-12};
}

Outcome threshold_ordering(Context&) {
  const reversal::Range axis{0.1, 6.0, 5.9 / 49.0};
  const auto v = axis.values();
  int violations = 0;
  for (double s : v) {
    for (double b : v) {
      const double ac = reversal::alpha_critical(s, b);
      const double ap = reversal::alpha_permanent(s, b);
      if (s == b) {
        if (ac != 0.0 || ap != 0.0) ++violations;
      } else if (!(std::abs(ac) < std::abs(ap))) {
        ++violations;
      }
    }
  }
  return {static_cast<double>(violations), violations == 0 && v.size() == 50};
}

std::vector<pair::MaxReversalPoint> fig2_curve() { return pair::max_reversal_curve(reversal::Range{0.1, 6.0, 0.05}.values()); }

Outcome max_reversal_peak(Context&) {
  const auto c = fig2_curve();
  const auto it = std::max_element(c.begin(), c.end(), [](auto& a, auto& b) { return a.delta_e < b.delta_e; });
  return {it->delta_e, std::abs(it->delta_e - 0.116) <= 0.005};
}

Outcome max_reversal_location(Context&) {
  const auto c = fig2_curve();
  const auto it = std::max_element(c.begin(), c.end(), [](auto& a, auto& b) { return a.delta_e < b.delta_e; });
  return {it->beta_b_omega, std::abs(it->beta_b_omega - 1.2) <= 0.2};
}

Outcome max_reversal_ratio(Context&) {
  const double r = pair::max_reversal_curve({4.0}).front().delta_e_over_e0;
  return {r, std::abs(r - 0.482) <= 0.005};
}

double entropy_neutral_delta_s(double b) {
  return pair::steady_report({b, {pair::alpha_max(b), 0.0}}, b).delta_s;
}

double entropy_neutral_root() {
  const auto grid = reversal::Range{0.05, 3.0, 0.01}.values();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if ((entropy_neutral_delta_s(grid[i - 1]) > 0.0) != (entropy_neutral_delta_s(grid[i]) > 0.0)) {
      return bisect(entropy_neutral_delta_s, grid[i - 1], grid[i]);
    }
  }
  throw InvalidInput("entropy change never crosses zero on the scan range");
}

Outcome entropy_root(Context&) {
  const double r = entropy_neutral_root();
  return {r, r >= 0.55 && r <= 0.75};
}

Outcome entropy_energy(Context&) {
  const double b = entropy_neutral_root();
  const double de = pair::steady_report({b, {pair::alpha_max(b), 0.0}}, b).delta_e;
  return {de, de <= -0.09};
}

Outcome thermal_fixed_point(Context&) {
  double worst = 0.0;
  for (double b : {0.5, 1.0, 2.0, 4.0, -1.0}) {
    const DensityOperator rho = pair::initial_state({b, {0.0, 0.0}});
    worst = std::max(worst, std::abs(heat_current(rho, pair::collective_ladder(), make_bath(b))));
  }
  return at_most(worst, 1e-12);
}

Outcome zero_alpha_equal_beta(Context&) {
  double worst = 0.0;
  for (double b : reversal::Range{0.3, 6.0, 0.3}.values()) {
    worst = std::max(worst, std::abs(pair::steady_report({b, {0.0, 0.0}}, b).delta_e));
  }
  return at_most(worst, 1e-12);
}

template <class F>
double over_collective_states(Context& ctx, F&& f) {
  double worst = -std::numeric_limits<double>::infinity();
  const auto& fig = ctx.fig1();
  for (const auto* set : {&fig.ode, &fig.analytic}) {
    for (const auto& traj : *set) {
      for (const auto& s : traj.states) worst = std::max(worst, f(traj.states.front().matrix(), s.matrix()));
    }
  }
  return worst;
}

Outcome pminus_conservation(Context& ctx) {
  return at_most(over_collective_states(ctx,
                                        [](const CMatrix& first, const CMatrix& s) {
                                          return std::abs(pair::collective_populations(s)[pair::kPsiMinus] -
                                                          pair::collective_populations(first)[pair::kPsiMinus]);
                                        }),
                 1e-9);
}

Outcome trace_conservation(Context& ctx) {
  return at_most(over_collective_states(ctx, [](const CMatrix&, const CMatrix& s) { return std::abs(s.trace() - 1.0); }),
                 1e-10);
}

Outcome positivity(Context& ctx) {
  const double lowest = -over_collective_states(
      ctx, [](const CMatrix&, const CMatrix& s) { return -hermitian_eigenvalues(s)(0); });
  return {lowest, lowest >= -1e-9};
}

Outcome relent_identity(Context& ctx) {
  double worst = 0.0;
  const auto& fig = ctx.fig1();
  std::vector<const Trajectory*> all;
  for (const auto& t : fig.ode) all.push_back(&t);
  for (const auto& t : fig.analytic) all.push_back(&t);
  std::vector<Trajectory> independent;
  for (double a : kFig1Alphas) {
    independent.push_back(dynamics::independent_pair_trajectory({kBetaS, {a, 0.0}}, ctx.bath(),
                                                                dynamics::uniform_grid(kTimeSpan, kGridSteps)));
  }
  for (const auto& t : independent) all.push_back(&t);
  for (const Trajectory* t : all) {
    for (const auto& r : dynamics::trajectory_observables(*t, kBetaS, kBetaB)) {
      worst = std::max(worst, r.identity_residual);
    }
  }
  return at_most(worst, 1e-9);
}

Outcome correlation_equality(Context&) {
  random::Engine rng(20240611);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const CorrelationTerm chi = random::correlation(rng, pair::layout());
    const auto c = correlation_expectations(chi, pair::collective_ladder());
    worst = std::max(worst, std::abs(c.c_minus - c.c_plus));
  }
  return at_most(worst, 1e-12);
}

Outcome energetic_inertness(Context&) {
  random::Engine rng(7321);
  const CMatrix& h = pair::hamiltonian().matrix();
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    CMatrix chi = random::hermitian(rng, 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        if (h(r, r) == h(c, c)) chi(r, c) = 0.0;
      }
    }
    const auto e = correlation_expectations(CoherenceTerm(chi), pair::collective_ladder());
    worst = std::max({worst, std::abs(e.c_minus), std::abs(e.c_plus)});
  }
  return at_most(worst, 1e-12);
}

Outcome im_alpha_invariance(Context& ctx) {
  const auto grid = dynamics::uniform_grid(kTimeSpan, kGridSteps);
  const auto gen = dynamics::pair_generator(ctx.bath());
  const double re = -0.02;
  const auto real_traj = dynamics::integrate(pair::initial_state({kBetaS, {re, 0.0}}), gen, grid);
  const auto cplx_traj =
      dynamics::integrate(pair::initial_state({kBetaS, {re, 0.5 * pair::alpha_max(kBetaS)}}), gen, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(energy(real_traj.states[i].matrix()) - energy(cplx_traj.states[i].matrix())));
  }
  return at_most(worst, 1e-10);
}

Outcome apparent_temperature_dual(Context& ctx) {
  const auto& ladder = pair::collective_ladder();
  double worst = 0.0;
  for (const auto& traj : ctx.fig1().ode) {
    const auto recs = dynamics::trajectory_observables(traj, kBetaS, kBetaB);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const double direct = apparent_temperature(traj.states[i], ladder).beta_omega;
      worst = std::max(worst, std::abs(direct - recs[i].beta_app_omega));
    }
  }
  const CMatrix loc = pair::thermal_tls(kBetaS);
  const DensityOperator rho_loc(kron(loc, loc), pair::layout());
  for (double a : kFig1Alphas) {
    const auto split = apparent_temperature_split(rho_loc, pair::correlation_term({a, 0.0}), ladder);
    const double direct = apparent_temperature(pair::initial_state({kBetaS, {a, 0.0}}), ladder).beta_omega;
    worst = std::max(worst, std::abs(split.beta_app_omega - direct));
  }
  return at_most(worst, 1e-12);
}

Outcome independent_thermalization(Context& ctx) {
  const CMatrix loc = pair::thermal_tls(kBetaB);
  const CMatrix target = kron(loc, loc);
  const auto gen = dynamics::pair_generator(ctx.bath(), dynamics::CouplingMode::independent);
  const double amax = pair::alpha_max(kBetaS);
  double worst = 0.0;
  for (double a : {-amax, -0.5 * amax, 0.0, 0.5 * amax, amax}) {
    const pair::PairConfig cfg{kBetaS, {a, 0.0}};
    const auto res = dynamics::integrate_to_steady(pair::initial_state(cfg), gen);
    worst = std::max(worst, max_abs(res.state - target));
  }
  return at_most(worst, 1e-8);
}

// First grid time after which |E - E_inf| stays below 1e-3.
double settle_time(const Trajectory& traj, double e_inf) {
  double t = traj.times.back();
  for (std::size_t i = traj.states.size(); i-- > 0;) {
    if (std::abs(energy(traj.states[i].matrix()) - e_inf) >= 1e-3) break;
    t = traj.times[i];
  }
  return t;
}

Outcome collective_faster(Context& ctx) {
  const auto grid = dynamics::uniform_grid(10.0, 1000);
  const DensityOperator rho0 = pair::initial_state({kBetaS, {0.0, 0.0}});
  const auto coll = dynamics::integrate(rho0, dynamics::pair_generator(ctx.bath()), grid);
  const auto ind =
      dynamics::integrate(rho0, dynamics::pair_generator(ctx.bath(), dynamics::CouplingMode::independent), grid);
  const double tc = settle_time(coll, pair::steady_energy(kBetaS, kBetaB, 0.0));
  const double ti = settle_time(ind, pair::thermal_energy(kBetaB));
  return {tc / ti, tc < ti};
}

const std::vector<Spec>& specs() {
  static const std::vector<Spec> s = {
      {"analytic-vs-ode", 1, "max |analytic - ODE| over the five reference curves, t in [0, 3]", "<= 1e-08",
       analytic_vs_ode},
      {"analytic-vs-ode-runtime", 1, "seconds to compute both sets of trajectories", "< 5", runtime},
      {"initial-energy", 2, "max |E(0) - 0.0586244615027126| over the five curves", "<= 1e-12", initial_energy},
      {"steady-energy", 2, "max |E(inf) integrated - closed form| over the five curves", "<= 1e-10", steady_energy},
      {"permanent-reversal-endpoint", 2, "E(inf) at Re alpha = -0.028453; must equal 0.0744842842 and exceed E(0)",
       "within 1e-10, > E(0)", permanent_endpoint},
      {"alpha-c-bisection", 3, "|root of initial heat current - alpha_c(3.5, 4)|", "<= 1e-09", alpha_c_bisection},
      {"alpha-p-root", 3, "|root of E(inf) - E(0) - alpha_p(3.5, 4)|", "<= 1e-09", alpha_p_root},
      {"threshold-ordering", 3, "cells violating |alpha_c| < |alpha_p| on a 50x50 grid over [0.1, 6]^2", "== 0",
       threshold_ordering},
      {"max-reversal-peak", 4, "peak Delta E on the diagonal with alpha = -alpha_max", "0.116 +- 0.005",
       max_reversal_peak},
      {"max-reversal-location", 4, "omega beta_B at the peak", "1.2 +- 0.2", max_reversal_location},
      {"max-reversal-ratio", 4, "Delta E / E(0) at omega beta_B = 4", "0.482 +- 0.005", max_reversal_ratio},
      {"entropy-neutral-root", 5, "root of Delta S on the diagonal with alpha = +alpha_max", "in [0.55, 0.75]",
       entropy_root},
      {"entropy-neutral-energy", 5, "Delta E at the entropy-neutral root", "<= -0.09", entropy_energy},
      {"thermal-fixed-point", 6, "max |heat current| of thermal states at the bath temperature", "<= 1e-12",
       thermal_fixed_point},
      {"zero-alpha-equal-beta", 6, "max |Delta E| for alpha = 0, beta_S = beta_B", "<= 1e-12", zero_alpha_equal_beta},
      {"pminus-conservation", 6, "max |p-(t) - p-(0)| along collective trajectories", "<= 1e-09",
       pminus_conservation},
      {"trace-conservation", 6, "max |Tr rho(t) - 1| along collective trajectories", "<= 1e-10", trace_conservation},
      {"positivity", 6, "smallest eigenvalue along collective trajectories", ">= -1e-09", positivity},
      {"relent-identity", 7, "max relative-entropy identity residual along every trajectory", "<= 1e-09",
       relent_identity},
      {"correlation-expectation-equality", 7, "max |C- - C+| over 1000 random correlation terms", "<= 1e-12",
       correlation_equality},
      {"energetic-coherence-inertness", 7, "max |C+-| of coherences between distinct energies", "<= 1e-12",
       energetic_inertness},
      {"im-alpha-invariance", 7, "max |E(t; Im alpha = 0) - E(t; Im alpha = alpha_max/2)|", "<= 1e-10",
       im_alpha_invariance},
      {"apparent-temperature-dual", 7, "max disagreement between apparent-temperature formulas", "<= 1e-12",
       apparent_temperature_dual},
      {"independent-thermalization", 8, "max |rho(inf) - product thermal| under local dissipation", "<= 1e-08",
       independent_thermalization},
      {"collective-faster", 8, "settling time ratio collective / independent (|E - E_inf| < 1e-3)", "< 1",
       collective_faster},
  };
  return s;
}

}  // namespace

std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const Spec& s : specs()) ids.emplace_back(s.id);
  return ids;
}

std::vector<Check> run(const Options& opts) {
  const auto ids = check_ids();
  for (const std::string& id : opts.only) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw InvalidInput("unknown check '" + id + "'");
  }
  Context ctx(opts);
  std::vector<Check> out;
  for (const Spec& s : specs()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), s.id) == opts.only.end()) continue;
    Check c{s.id, s.criterion, s.description, s.bound, kNaN, false, {}};
    try {
      const Outcome o = s.fn(ctx);
      c.observed = o.observed;
      c.pass = o.pass;
    } catch (const std::exception& e) {
      c.error = e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool criterion_pass(const std::vector<Check>& checks, int criterion) {
  bool any = false;
  for (const Check& c : checks) {
    if (c.criterion != criterion) continue;
    any = true;
    if (!c.pass) return false;
  }
  return any;
}

void print_table(std::ostream& os, const std::vector<Check>& checks) {
  char line[256];
  std::snprintf(line, sizeof line, "%-4s %-34s %-22s %-24s %s\n", "crit", "check", "bound", "observed", "status");
  os << line;
  for (const Check& c : checks) {
    std::snprintf(line, sizeof line, "%-4d %-34s %-22s %-24.17g %s\n", c.criterion, c.id.c_str(), c.bound.c_str(),
                  c.observed, c.pass ? "PASS" : "FAIL");
    os << line;
    if (!c.error.empty()) os << "     error: " << c.error << '\n';
  }
}

}  // namespace qheat::verify
