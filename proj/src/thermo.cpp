#include "qheat/thermo.hpp"

#include <cmath>
#include <limits>

#include "qheat/error.hpp"

namespace qheat {
namespace {

constexpr double kZeroWeight = 1e-14;

void require_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": dimension mismatch");
}

double real_expectation(const CMatrix& rho, const CMatrix& op) { return trace_product(rho, op).real(); }

}  // namespace

double BathSpec::g_minus() const { return g_plus * std::exp(-beta_omega); }

BathSpec make_bath(double beta_omega, double g_plus) {
  if (!std::isfinite(beta_omega)) throw InvalidInput("bath temperature must be finite");
  if (!(g_plus > 0.0) || !std::isfinite(g_plus)) throw InvalidInput("bath rate G(omega) must be positive");
  return BathSpec{beta_omega, g_plus};
}

bool ApparentTemperature::finite() const { return std::isfinite(beta_omega); }

TransitionWeights transition_weights(const DensityOperator& rho, const LadderPair& pair) {
  require_dim(rho.dim(), pair.dim(), "transition_weights");
  TransitionWeights w;
  w.up = std::max(0.0, real_expectation(rho.matrix(), pair.up_weight()));
  w.down = std::max(0.0, real_expectation(rho.matrix(), pair.down_weight()));
  return w;
}

ApparentTemperature apparent_temperature(TransitionWeights w) {
  const bool up_zero = w.up < kZeroWeight;
  const bool down_zero = w.down < kZeroWeight;
  if (up_zero && down_zero) return {std::numeric_limits<double>::quiet_NaN()};
  if (down_zero) return {std::numeric_limits<double>::infinity()};
  if (up_zero) return {-std::numeric_limits<double>::infinity()};
  return {std::log(w.up / w.down)};
}

ApparentTemperature apparent_temperature(const DensityOperator& rho, const LadderPair& pair) {
  return apparent_temperature(transition_weights(rho, pair));
}

ApparentTemperatureSplit apparent_temperature_split(const DensityOperator& rho_loc, const CoherenceTerm& chi,
                                                    const LadderPair& pair) {
  require_dim(rho_loc.dim(), chi.dim(), "apparent_temperature_split");
  require_dim(rho_loc.dim(), pair.dim(), "apparent_temperature_split");
  // The combined state must itself be a state.
  const DensityVerdict combined = validate_density(rho_loc.matrix() + chi.matrix());
  if (!combined.ok()) {
    throw PositivityError("apparent_temperature_split: rho_loc + chi is not a valid state",
                          combined.min_eigenvalue);
  }
  const TransitionWeights loc = transition_weights(rho_loc, pair);
  if (loc.up < kZeroWeight || loc.down < kZeroWeight) {
    throw DegenerateSplit("apparent_temperature_split: local transition weight vanishes");
  }
  const CorrelationExpectations cor = correlation_expectations(chi, pair);
  ApparentTemperatureSplit s;
  s.beta_loc_omega = std::log(loc.up / loc.down);
  s.c_plus = cor.c_plus / loc.up;
  s.c_minus = cor.c_minus / loc.down;
  if (1.0 + s.c_plus <= 0.0 || 1.0 + s.c_minus <= 0.0) {
    throw DegenerateSplit("apparent_temperature_split: 1 + c must be positive (state boundary)");
  }
  s.beta_app_omega = s.beta_loc_omega + std::log((1.0 + s.c_plus) / (1.0 + s.c_minus));
  return s;
}

CorrelationExpectations correlation_expectations(const CoherenceTerm& chi, const LadderPair& pair) {
  require_dim(chi.dim(), pair.dim(), "correlation_expectations");
  return {real_expectation(chi.matrix(), pair.down_weight()), real_expectation(chi.matrix(), pair.up_weight())};
}

double heat_current(const DensityOperator& rho, const LadderPair& pair, const BathSpec& bath) {
  const TransitionWeights w = transition_weights(rho, pair);
  return 2.0 * pair.frequency() * (bath.g_minus() * w.up - bath.g_plus * w.down);
}

}  // namespace qheat
