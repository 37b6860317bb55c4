#include "qheat/pairtls.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qheat/error.hpp"

namespace qheat::pair {
namespace {

constexpr double kAlphaSlack = 1e-12;

// -p ln p with 0 ln 0 = 0.
double neg_plogp(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

CMatrix make_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, kPsi0) = 1.0;
  u(1, kPsiPlus) = s;
  u(2, kPsiPlus) = s;
  u(1, kPsiMinus) = s;
  u(2, kPsiMinus) = -s;
  u(3, kPsi1) = 1.0;
  return u;
}

CMatrix from_collective_diagonal(const std::array<double, 4>& p) {
  const CMatrix& u = collective_basis();
  CMatrix d = CMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) d(k, k) = p[static_cast<std::size_t>(k)];
  return u * d * u.adjoint();
}

}  // namespace

const CMatrix& collective_basis() {
  static const CMatrix u = make_basis();
  return u;
}

const Layout& layout() {
  static const Layout l{2, 2};
  return l;
}

const CMatrix& local_lowering() {
  static const CMatrix s = [] {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
  }();
  return s;
}

const CMatrix& collective_lowering() {
  static const CMatrix s = kron(local_lowering(), identity(2)) + kron(identity(2), local_lowering());
  return s;
}

const HermitianObservable& hamiltonian() {
  static const HermitianObservable h = [] {
    CMatrix m = CMatrix::Zero(4, 4);
    m(1, 1) = 1.0;
    m(2, 2) = 1.0;
    m(3, 3) = 2.0;
    return HermitianObservable(m);
  }();
  return h;
}

const LadderPair& collective_ladder() {
  static const LadderPair p = [] {
    const CMatrix& s = collective_lowering();
    return ladder_pair(hamiltonian(), HermitianObservable(s + s.adjoint()), 1.0);
  }();
  return p;
}

double partition(double b) {
  const double x = std::exp(-b);
  return (1.0 + x) * (1.0 + x);
}

double z(double b) {
  const double x = std::exp(-b);
  return (1.0 + x + x * x) / ((1.0 + x) * (1.0 + x));
}

double thermal_energy(double b) {
  const double x = std::exp(-b);
  return 2.0 * x / (1.0 + x);
}

double alpha_max(double b) {
  const double x = std::exp(-b);
  return x / ((1.0 + x) * (1.0 + x));
}

void validate(const PairConfig& cfg) {
  if (!std::isfinite(cfg.beta_s_omega)) throw InvalidInput("beta_S must be finite");
  const double bound = alpha_max(cfg.beta_s_omega);
  const double mag = std::abs(cfg.alpha);
  if (!(mag <= bound + kAlphaSlack)) {
    std::ostringstream os;
    os.precision(8);
    os << "initial state is not positive: |alpha| = " << mag << " exceeds alpha_max(" << cfg.beta_s_omega
       << ") = " << bound;
    throw PositivityError(os.str(), bound - mag);
  }
}

CMatrix thermal_tls(double b) {
  const double x = std::exp(-b);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0 / (1.0 + x);
  m(1, 1) = x / (1.0 + x);
  return m;
}

CorrelationTerm correlation_term(std::complex<double> alpha) {
  CMatrix chi = CMatrix::Zero(4, 4);
  chi(1, 2) = alpha;
  chi(2, 1) = std::conj(alpha);
  return CorrelationTerm(std::move(chi), layout());
}

DensityOperator initial_state(const PairConfig& cfg) {
  validate(cfg);
  const CMatrix th = thermal_tls(cfg.beta_s_omega);
  CMatrix rho = kron(th, th);
  rho(1, 2) += cfg.alpha;
  rho(2, 1) += std::conj(cfg.alpha);
  return DensityOperator(std::move(rho), layout());
}

std::array<double, 4> collective_populations(const CMatrix& rho) {
  const CMatrix& u = collective_basis();
  std::array<double, 4> p{};
  for (int k = 0; k < 4; ++k) {
    p[static_cast<std::size_t>(k)] = (u.col(k).adjoint() * rho * u.col(k))(0, 0).real();
  }
  return p;
}

double r_constant(const PairConfig& cfg) { return z(cfg.beta_s_omega) + cfg.alpha.real(); }

DensityOperator steady_state(double beta_b, double r) {
  if (!(r >= -kAlphaSlack && r <= 1.0 + kAlphaSlack)) {
    throw InvalidInput("steady_state: r = " + std::to_string(r) + " outside [0, 1]");
  }
  r = std::clamp(r, 0.0, 1.0);
  const double x = std::exp(-beta_b);
  const double zt = 1.0 + x + x * x;
  std::array<double, 4> p{};
  p[kPsi0] = r / zt;
  p[kPsiPlus] = r * x / zt;
  p[kPsi1] = r * x * x / zt;
  p[kPsiMinus] = 1.0 - r;
  return DensityOperator(from_collective_diagonal(p), layout());
}

double steady_energy(double beta_s, double beta_b, double re_alpha) {
  if (!(std::abs(re_alpha) <= alpha_max(beta_s) + kAlphaSlack)) {
    throw InvalidInput("steady_energy: |Re alpha| exceeds alpha_max(beta_S)");
  }
  const double x = std::exp(-beta_b);
  return 1.0 + (re_alpha + z(beta_s)) * (x * x - 1.0) / (1.0 + x + x * x);
}

double steady_entropy(double beta_b, double r) {
  if (!(r >= -kAlphaSlack && r <= 1.0 + kAlphaSlack)) {
    throw InvalidInput("steady_entropy: r outside [0, 1]");
  }
  r = std::clamp(r, 0.0, 1.0);
  const double x = std::exp(-beta_b);
  const double zt = 1.0 + x + x * x;
  double s = neg_plogp(1.0 - r);
  if (r > 0.0) s += r * std::log(zt / r) + r * beta_b * (x + 2.0 * x * x) / zt;
  return s;
}

double initial_entropy(double beta_s, double abs_alpha) {
  if (!(abs_alpha >= 0.0 && abs_alpha <= alpha_max(beta_s) + kAlphaSlack)) {
    throw InvalidInput("initial_entropy: |alpha| outside [0, alpha_max]");
  }
  const double x = std::exp(-beta_s);
  const double zp = partition(beta_s);
  const double mid = x / zp;
  // |alpha| e^{beta} Z = |alpha| / (x/Z)
  const double ratio = abs_alpha / mid;
  double s = std::log(zp) + 2.0 * beta_s * x / (1.0 + x);
  s -= (mid + abs_alpha) * std::log1p(ratio);
  const double lower = mid - abs_alpha;
  if (lower > 0.0 && ratio < 1.0) s -= lower * std::log1p(-ratio);
  return s;
}

SteadyReport steady_report(const PairConfig& cfg, double beta_b) {
  validate(cfg);
  SteadyReport rep;
  rep.r = std::clamp(r_constant(cfg), 0.0, 1.0);
  rep.e_inf_over_omega = steady_energy(cfg.beta_s_omega, beta_b, cfg.alpha.real());
  rep.s_inf = steady_entropy(beta_b, rep.r);
  rep.e0_over_omega = thermal_energy(cfg.beta_s_omega);
  rep.s0 = initial_entropy(cfg.beta_s_omega, std::min(std::abs(cfg.alpha), alpha_max(cfg.beta_s_omega)));
  rep.delta_e = rep.e_inf_over_omega - rep.e0_over_omega;
  rep.delta_s = rep.s_inf - rep.s0;
  return rep;
}

double reversing_alpha(double beta_b) { return beta_b >= 0.0 ? -alpha_max(beta_b) : alpha_max(beta_b); }

std::vector<MaxReversalPoint> max_reversal_curve(const std::vector<double>& grid) {
  std::vector<MaxReversalPoint> out;
  out.reserve(grid.size());
  for (double b : grid) {
    MaxReversalPoint p;
    p.beta_b_omega = b;
    p.re_alpha = reversing_alpha(b);
    const double e0 = thermal_energy(b);
    p.delta_e = steady_energy(b, b, p.re_alpha) - e0;
    p.delta_e_over_e0 = p.delta_e / e0;
    out.push_back(p);
  }
  return out;
}

}  // namespace qheat::pair
