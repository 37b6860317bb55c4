#pragma once

// Apparent temperature, its local/correlation split, and the heat current
// into the system under the collective dissipator
//   G+ (2 A rho A^dag - {A^dag A, rho}) + G- (2 A^dag rho A - {A A^dag, rho}).

#include "qheat/eigenops.hpp"
#include "qheat/qcore.hpp"

namespace qheat {

/// Thermal bath seen through its two transition rates.
struct BathSpec {
  /// omega * beta_B; negative for an inverted bath.
  double beta_omega = 1.0;
  /// Downward rate G(omega); sets the unit of time.
  double g_plus = 1.0;

  /// Upward rate G(-omega) = G(omega) e^{-omega beta_B}.
  double g_minus() const;
};

/// Validates rates; throws InvalidInput for g_plus <= 0 or a non-finite temperature.
BathSpec make_bath(double beta_omega, double g_plus = 1.0);

/// omega / T_app = ln(<A A^dag> / <A^dag A>). +inf for a ground-like state
/// (<A^dag A> = 0), -inf for a fully inverted one, NaN when both vanish.
struct ApparentTemperature {
  double beta_omega = 0.0;
  bool finite() const;
};

/// <A A^dag> and <A^dag A> in a state, clipped at 0.
struct TransitionWeights {
  double up = 0.0;
  double down = 0.0;
};

TransitionWeights transition_weights(const DensityOperator& rho, const LadderPair& pair);

ApparentTemperature apparent_temperature(const DensityOperator& rho, const LadderPair& pair);

/// From the weights directly.
ApparentTemperature apparent_temperature(TransitionWeights w);

struct ApparentTemperatureSplit {
  double beta_loc_omega = 0.0;
  double c_plus = 0.0;
  double c_minus = 0.0;
  double beta_app_omega = 0.0;
};

/// beta_app = beta_loc + ln((1 + c+)/(1 + c-)) with
/// c+ = <A A^dag>_chi / <A A^dag>_loc and c- = <A^dag A>_chi / <A^dag A>_loc.
/// Throws DegenerateSplit when a local weight vanishes or 1 + c <= 0.
ApparentTemperatureSplit apparent_temperature_split(const DensityOperator& rho_loc, const CoherenceTerm& chi,
                                                    const LadderPair& pair);

struct CorrelationExpectations {
  /// Tr chi A^dag A
  double c_minus = 0.0;
  /// Tr chi A A^dag
  double c_plus = 0.0;
};

CorrelationExpectations correlation_expectations(const CoherenceTerm& chi, const LadderPair& pair);

/// dE_S/dt = 2 omega (G- <A A^dag> - G+ <A^dag A>)
///         = 2 omega G+ <A A^dag> (e^{-omega beta_B} - e^{-omega beta_app}).
double heat_current(const DensityOperator& rho, const LadderPair& pair, const BathSpec& bath);

}  // namespace qheat
