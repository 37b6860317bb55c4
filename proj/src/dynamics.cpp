#include "qheat/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qheat/error.hpp"
#include "qheat/kernels.hpp"

namespace qheat::dynamics {
namespace {

constexpr double kPositivityFloor = -1e-7;
constexpr double kSteadyDerivative = 1e-12;
constexpr double kSteadyTimeLimit = 50.0;

void check_rate(double v, bool strict, const char* name) {
  if (!std::isfinite(v) || (strict ? !(v > 0.0) : !(v >= 0.0))) {
    throw InvalidInput(std::string(name) + (strict ? " must be positive and finite" : " must be non-negative and finite"));
  }
}

// I_{before} (x) local (x) I_{after}
CMatrix embed(const CMatrix& local, const Layout& layout, std::size_t slot) {
  std::size_t before = 1;
  std::size_t after = 1;
  for (std::size_t k = 0; k < layout.size(); ++k) {
    if (k < slot) before *= layout[k];
    if (k > slot) after *= layout[k];
  }
  return kron(kron(identity(before), local), identity(after));
}

void add_channel(std::vector<JumpChannel>& out, const CMatrix& op, double rate) {
  if (rate == 0.0) return;
  out.push_back({op, op.adjoint(), rate});
}

CMatrix rk4_step(const CMatrix& y, double h, const GeneratorSpec& gen) {
  const CMatrix k1 = lindblad_rhs(y, gen);
  const CMatrix k2 = lindblad_rhs(y + (0.5 * h) * k1, gen);
  const CMatrix k3 = lindblad_rhs(y + (0.5 * h) * k2, gen);
  const CMatrix k4 = lindblad_rhs(y + h * k3, gen);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double initial_step(const GeneratorSpec& gen) {
  double scale = std::max(gen.g_plus(), gen.g_minus());
  scale = std::max(scale, max_abs(gen.h_eff().matrix()));
  return 0.01 / scale;
}

void check_positivity(const CMatrix& y, double t) {
  const double lo = hermitian_eigenvalues(y)(0);
  if (lo < kPositivityFloor) {
    throw IntegrationUnstable("integrated state lost positivity at t = " + std::to_string(t) +
                              " (smallest eigenvalue " + std::to_string(lo) + ")");
  }
}

// Advances y from t to `target`. `stop(y, t)` is consulted after every
// accepted step and may end the advance early.
template <class Stop>
void advance(CMatrix& y, double& t, double target, double& h, const GeneratorSpec& gen, double tol, Stop&& stop) {
  while (t < target) {
    const bool clipped = target - t <= h;
    const double step = clipped ? target - t : h;
    const CMatrix y1 = rk4_step(y, step, gen);
    const CMatrix yh = rk4_step(y, 0.5 * step, gen);
    const CMatrix y2 = rk4_step(yh, 0.5 * step, gen);
    const CMatrix diff = y2 - y1;
    const double err = max_abs(diff) / 15.0;
    if (!std::isfinite(err)) throw IntegrationUnstable("non-finite local error estimate");
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 5.0);
    if (err <= tol) {
      CMatrix next = y2 + diff / 15.0;
      y = 0.5 * (next + next.adjoint());
      t = clipped ? target : t + step;
      check_positivity(y, t);
      if (!clipped || factor < 1.0) h = step * factor;
      if (stop(y, t)) return;
    } else {
      h = step * factor;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) throw IntegrationUnstable("step size underflow");
  }
}

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty() || t_grid.front() != 0.0) throw InvalidInput("time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1]) || !std::isfinite(t_grid[i])) {
      throw InvalidInput("time grid must be strictly increasing and finite");
    }
  }
}

// e^{M t} for a complex 2x2 M.
std::array<Complex, 4> expm2(Complex m00, Complex m01, Complex m10, Complex m11, double t) {
  const Complex tau = 0.5 * (m00 + m11);
  const Complex half = 0.5 * (m00 - m11);
  const Complex delta = std::sqrt(half * half + m01 * m10);
  const Complex ep = std::exp((tau + delta) * t);
  const Complex em = std::exp((tau - delta) * t);
  const Complex c = 0.5 * (ep + em);
  Complex s;  // e^{tau t} sinh(delta t) / delta
  if (std::abs(delta * t) < 1e-4) {
    const Complex dt = delta * t;
    s = std::exp(tau * t) * t * (1.0 + dt * dt / 6.0);
  } else {
    s = 0.5 * (ep - em) / delta;
  }
  return {c + s * half, s * m01, s * m10, c - s * half};
}

}  // namespace

GeneratorSpec::GeneratorSpec(HermitianObservable h_eff, CMatrix jump_down, double g_plus, double g_minus,
                             CouplingMode mode, Layout layout)
    : h_eff_(std::move(h_eff)),
      jump_down_(std::move(jump_down)),
      g_plus_(g_plus),
      g_minus_(g_minus),
      mode_(mode),
      layout_(std::move(layout)) {
  check_rate(g_plus_, true, "G+");
  check_rate(g_minus_, false, "G-");
  const std::size_t n = h_eff_.dim();
  if (jump_down_.rows() != jump_down_.cols()) throw DimensionError("jump operator must be square");
  if (mode_ == CouplingMode::collective) {
    if (static_cast<std::size_t>(jump_down_.rows()) != n) {
      throw DimensionError("jump operator dimension does not match H_eff");
    }
    add_channel(channels_, jump_down_, g_plus_);
    add_channel(channels_, jump_down_.adjoint(), g_minus_);
  } else {
    if (layout_.empty()) throw InvalidInput("independent coupling requires a tensor layout");
    std::size_t total = 1;
    for (std::size_t d : layout_) {
      if (d != static_cast<std::size_t>(jump_down_.rows())) {
        throw DimensionError("every subsystem must match the local jump operator dimension");
      }
      total *= d;
    }
    if (total != n) throw DimensionError("layout does not match H_eff dimension");
    for (std::size_t k = 0; k < layout_.size(); ++k) {
      const CMatrix a = embed(jump_down_, layout_, k);
      add_channel(channels_, a, g_plus_);
      add_channel(channels_, a.adjoint(), g_minus_);
    }
  }
  h_nh_ = h_eff_.matrix();
  for (const JumpChannel& c : channels_) h_nh_ -= Complex(0.0, c.rate) * (c.op_adjoint * c.op);
}

CMatrix PairHamiltonian::matrix() const {
  const CMatrix& sm = pair::local_lowering();
  const CMatrix id = identity(2);
  const CMatrix s1 = kron(sm, id);
  const CMatrix s2 = kron(id, sm);
  CMatrix h = lamb_shift * (s1.adjoint() * s1 + s2.adjoint() * s2);
  h += exchange * (s1.adjoint() * s2 + s1 * s2.adjoint());
  return h;
}

GeneratorSpec pair_generator(const BathSpec& bath, CouplingMode mode, const PairHamiltonian& h) {
  if (mode == CouplingMode::collective) {
    return GeneratorSpec(HermitianObservable(h.matrix()), pair::collective_lowering(), bath.g_plus, bath.g_minus(),
                         mode, pair::layout());
  }
  return GeneratorSpec(HermitianObservable(h.matrix()), pair::local_lowering(), bath.g_plus, bath.g_minus(), mode,
                       pair::layout());
}

CMatrix lindblad_rhs(const CMatrix& rho, const GeneratorSpec& gen) {
  const std::size_t n = gen.dim();
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != n) {
    throw DimensionError("state dimension does not match the generator");
  }
  const kernels::KernelSet& k = kernels::active();
  CMatrix t(n, n);
  k.gemm(n, gen.non_hermitian_hamiltonian().data(), rho.data(), t.data());
  CMatrix out = Complex(0.0, -1.0) * (t - t.adjoint());
  CMatrix lr(n, n);
  CMatrix lrl(n, n);
  for (const JumpChannel& c : gen.channels()) {
    k.gemm(n, c.op.data(), rho.data(), lr.data());
    k.gemm(n, lr.data(), c.op_adjoint.data(), lrl.data());
    k.axpy(n * n, 2.0 * c.rate, lrl.data(), out.data());
  }
  return out;
}

CMatrix lindblad_rhs(const DensityOperator& rho, const GeneratorSpec& gen) { return lindblad_rhs(rho.matrix(), gen); }

Trajectory integrate(const DensityOperator& rho0, const GeneratorSpec& gen, const std::vector<double>& t_grid,
                     double tol) {
  check_grid(t_grid);
  if (!(tol > 0.0)) throw InvalidInput("integration tolerance must be positive");
  if (rho0.dim() != gen.dim()) throw DimensionError("state dimension does not match the generator");
  Trajectory traj;
  traj.times.reserve(t_grid.size());
  traj.states.reserve(t_grid.size());
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  CMatrix y = rho0.matrix();
  double t = 0.0;
  double h = initial_step(gen);
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    advance(y, t, t_grid[i], h, gen, tol, [](const CMatrix&, double) { return false; });
    traj.times.push_back(t_grid[i]);
    traj.states.emplace_back(y, rho0.layout(), kIntegratedStateTolerance);
  }
  return traj;
}

SteadyResult integrate_to_steady(const DensityOperator& rho0, const GeneratorSpec& gen, double tol) {
  if (rho0.dim() != gen.dim()) throw DimensionError("state dimension does not match the generator");
  SteadyResult res;
  CMatrix y = rho0.matrix();
  double t = 0.0;
  double h = initial_step(gen);
  const double limit = kSteadyTimeLimit / gen.g_plus();
  res.residual = max_abs(lindblad_rhs(y, gen));
  if (res.residual >= kSteadyDerivative) {
    advance(y, t, limit, h, gen, tol, [&](const CMatrix& s, double) {
      res.residual = max_abs(lindblad_rhs(s, gen));
      return res.residual < kSteadyDerivative;
    });
  }
  res.state = y;
  res.time = t;
  res.criterion = res.residual < kSteadyDerivative ? SteadyCriterion::derivative : SteadyCriterion::time_limit;
  return res;
}

std::vector<double> uniform_grid(double t_max, std::size_t n_steps) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidInput("t_max must be positive and finite");
  if (n_steps == 0) throw InvalidInput("n_steps must be positive");
  std::vector<double> g(n_steps + 1);
  for (std::size_t i = 0; i <= n_steps; ++i) g[i] = t_max * static_cast<double>(i) / static_cast<double>(n_steps);
  return g;
}

PairRates pair_population_rates(const BathSpec& bath) {
  PairRates r;
  r.g_plus = bath.g_plus;
  r.g_minus = bath.g_minus();
  const double root = std::sqrt(r.g_plus * r.g_minus);
  r.a_plus = 4.0 * (root - r.g_plus - r.g_minus);
  r.a_minus = 4.0 * (-root - r.g_plus - r.g_minus);
  return r;
}

CMatrix analytic_pair_state(const CMatrix& rho0, const PairRates& rates, double t, const PairHamiltonian& h) {
  if (rho0.rows() != 4 || rho0.cols() != 4) throw DimensionError("analytic pair solution needs a 4x4 state");
  const double gp = rates.g_plus;
  const double gm = rates.g_minus;
  if (!(gp > 0.0) || !(gm > 0.0)) throw InvalidInput("analytic pair solution needs G+ > 0 and G- > 0");
  using namespace pair;
  const CMatrix& u = collective_basis();
  const CMatrix r0 = u.adjoint() * rho0 * u;
  CMatrix r = CMatrix::Zero(4, 4);

  // populations
  const double s = std::sqrt(gm / gp);
  const double p0 = r0(kPsi0, kPsi0).real();
  const double pp = r0(kPsiPlus, kPsiPlus).real();
  const double p1 = r0(kPsi1, kPsi1).real();
  const double rr = p0 + pp + p1;
  const auto evolve_q = [&](double q0, double a) { return std::exp(a * t) * q0 + 4.0 * gp * rr * std::expm1(a * t) / a; };
  const double qp = evolve_q(pp + (1.0 + s) * p0, rates.a_plus);
  const double qm = evolve_q(pp + (1.0 - s) * p0, rates.a_minus);
  const double p0t = (qp - qm) / (2.0 * s);
  const double ppt = qp - (1.0 + s) * p0t;
  r(kPsi0, kPsi0) = p0t;
  r(kPsiPlus, kPsiPlus) = ppt;
  r(kPsi1, kPsi1) = rr - p0t - ppt;
  r(kPsiMinus, kPsiMinus) = r0(kPsiMinus, kPsiMinus);

  const double w = h.lamb_shift;
  const double x = h.exchange;
  const std::array<double, 4> e{0.0, w + x, w - x, 2.0 * w};  // indexed by CollectiveIndex
  const auto phase = [&](int i, int j) { return Complex(0.0, -(e[i] - e[j])); };

  // (rho_{+1}, rho_{0+}) coupled block
  const Complex lu = -4.0 * gp - 2.0 * gm + phase(kPsiPlus, kPsi1);
  const Complex lv = -2.0 * gp - 4.0 * gm + phase(kPsi0, kPsiPlus);
  const auto m = expm2(lu, 4.0 * gm, 4.0 * gp, lv, t);
  const Complex u0 = r0(kPsiPlus, kPsi1);
  const Complex v0 = r0(kPsi0, kPsiPlus);
  r(kPsiPlus, kPsi1) = m[0] * u0 + m[1] * v0;
  r(kPsi0, kPsiPlus) = m[2] * u0 + m[3] * v0;

  // decoupled coherences
  const auto decay = [&](int i, int j, double rate) { r(i, j) = std::exp((-rate + phase(i, j)) * t) * r0(i, j); };
  decay(kPsi0, kPsiMinus, 2.0 * gm);
  decay(kPsiPlus, kPsiMinus, 2.0 * gp + 2.0 * gm);
  decay(kPsiMinus, kPsi1, 2.0 * gp);
  decay(kPsi0, kPsi1, 2.0 * gp + 2.0 * gm);

  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) r(i, j) = std::conj(r(j, i));
  }
  return u * r * u.adjoint();
}

Trajectory analytic_pair_trajectory(const PairConfig& cfg, const PairRates& rates, const std::vector<double>& t_grid,
                                    const PairHamiltonian& h) {
  check_grid(t_grid);
  const DensityOperator rho0 = pair::initial_state(cfg);
  Trajectory traj;
  for (double t : t_grid) {
    traj.times.push_back(t);
    traj.states.emplace_back(analytic_pair_state(rho0.matrix(), rates, t, h), pair::layout(),
                             kIntegratedStateTolerance);
  }
  return traj;
}

Trajectory analytic_pair_trajectory(const PairConfig& cfg, const BathSpec& bath, const std::vector<double>& t_grid,
                                    const PairHamiltonian& h) {
  return analytic_pair_trajectory(cfg, pair_population_rates(bath), t_grid, h);
}

Trajectory independent_pair_trajectory(const PairConfig& cfg, const BathSpec& bath,
                                       const std::vector<double>& t_grid) {
  check_grid(t_grid);
  pair::validate(cfg);
  const double gp = bath.g_plus;
  const double gm = bath.g_minus();
  const double k = 2.0 * (gp + gm);
  const double xs = std::exp(-cfg.beta_s_omega);
  const double p_init = xs / (1.0 + xs);
  const double p_inf = gm / (gp + gm);
  Trajectory traj;
  for (double t : t_grid) {
    const double decay = std::exp(-k * t);
    const double p = p_inf + (p_init - p_inf) * decay;
    CMatrix loc = CMatrix::Zero(2, 2);
    loc(0, 0) = 1.0 - p;
    loc(1, 1) = p;
    CMatrix rho = kron(loc, loc) + pair::correlation_term(cfg.alpha * decay).matrix();
    traj.times.push_back(t);
    traj.states.emplace_back(std::move(rho), pair::layout(), kIntegratedStateTolerance);
  }
  return traj;
}

std::vector<Record> trajectory_observables(const Trajectory& traj, double beta_s_omega, double /*beta_b_omega*/) {
  std::vector<Record> out;
  if (traj.states.empty()) return out;
  for (const DensityOperator& s : traj.states) {
    if (s.dim() != 4) throw DimensionError("trajectory observables need pair states");
  }
  const std::array<std::size_t, 1> first{0};
  const std::array<std::size_t, 1> second{1};
  const auto local = [&](const DensityOperator& s, const std::array<std::size_t, 1>& keep) {
    return DensityOperator(partial_trace(s.matrix(), pair::layout(), keep), {}, kIntegratedStateTolerance);
  };
  const DensityOperator init1 = local(traj.states.front(), first);
  const DensityOperator init2 = local(traj.states.front(), second);
  const double s10 = von_neumann_entropy(init1);
  const double s20 = von_neumann_entropy(init2);
  const double e10 = init1.matrix()(1, 1).real();
  const double e20 = init2.matrix()(1, 1).real();

  out.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const DensityOperator& s = traj.states[i];
    Record rec;
    rec.t = traj.times[i];
    const auto p = pair::collective_populations(s.matrix());
    rec.p0 = p[pair::kPsi0];
    rec.pplus = p[pair::kPsiPlus];
    rec.pminus = p[pair::kPsiMinus];
    rec.p1 = p[pair::kPsi1];
    rec.e_over_omega = 2.0 * rec.p1 + rec.pplus + rec.pminus;
    const double up = rec.p0 + rec.pplus;
    const double down = rec.p1 + rec.pplus;
    rec.beta_app_omega = apparent_temperature(TransitionWeights{2.0 * up, 2.0 * down}).beta_omega;

    const DensityOperator l1 = local(s, first);
    const DensityOperator l2 = local(s, second);
    rec.s_s = von_neumann_entropy(s);
    rec.s_s1 = von_neumann_entropy(l1);
    rec.s_s2 = von_neumann_entropy(l2);
    rec.i_s1s2 = rec.s_s1 + rec.s_s2 - rec.s_s;
    rec.relent_s1 = relative_entropy(l1, init1);
    rec.relent_s2 = relative_entropy(l2, init2);
    const double r1 = rec.relent_s1 + (rec.s_s1 - s10) - beta_s_omega * (l1.matrix()(1, 1).real() - e10);
    const double r2 = rec.relent_s2 + (rec.s_s2 - s20) - beta_s_omega * (l2.matrix()(1, 1).real() - e20);
    rec.identity_residual = std::max(std::abs(r1), std::abs(r2));
    out.push_back(rec);
  }
  return out;
}

AnalyticSolver default_analytic_solver() {
  return [](const PairConfig& cfg, const BathSpec& bath, const std::vector<double>& t_grid) {
    return analytic_pair_trajectory(cfg, bath, t_grid);
  };
}

}  // namespace qheat::dynamics
