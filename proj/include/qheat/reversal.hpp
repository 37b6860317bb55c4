#pragma once

// Heat-flow reversal thresholds and feasibility bounds.
//
// "Natural" flow runs from the hotter to the colder party: into S when
// beta_S > beta_B, out of S when beta_S < beta_B (this ordering also holds
// for negative temperatures). A reversal is a flow against it.

#include <optional>
#include <string>
#include <vector>

#include "qheat/pairtls.hpp"

namespace qheat::reversal {

/// Initial-time reversal for correlations with <A^dag A>_cor = <A A^dag>_cor = C:
/// C > <A^dag A>_loc (e^{bS} - e^{bB})/(e^{bB} - 1) > 0 for bS > bB, the
/// mirror for bS < bB, and the inequalities inverted for bB < 0.
bool condition_general(double c, double loc_down, double beta_s_omega, double beta_b_omega);

/// Same for coherences with distinct weights C+ = <A A^dag>_coh,
/// C- = <A^dag A>_coh:  e^{bB} C- - C+ > <A^dag A>_loc (e^{bS} - e^{bB}) > 0
/// for bS > bB, and the mirror for bS < bB.
bool condition_coherence(double c_plus, double c_minus, double loc_down, double beta_s_omega,
                         double beta_b_omega);

/// alpha_c = (e^{bS} - e^{bB}) / ((e^{bS} + 1)(e^{bB} - 1)). 0 when bS = bB;
/// throws SingularThreshold for bB = 0.
double alpha_critical(double beta_s_omega, double beta_b_omega);

/// alpha_p = z(bB) (1 + e^{-bB})/(1 - e^{-bB}) (1 - e^{-bS})/(1 + e^{-bS}) - z(bS).
/// 0 when bS = bB; throws SingularThreshold for bB = 0.
double alpha_permanent(double beta_s_omega, double beta_b_omega);

/// Largest |alpha| compatible with positivity: e^{-bS}/(1 + e^{-bS})^2.
double alpha_bound(double beta_s_omega);

struct FeasibilityBounds {
  /// Heating by a hotter bath can be reversed only for bB >= this value
  /// (bS - ln[(1 + 2e^{bS})/(2 + e^{bS})]).
  double min_beta_b_omega_for_heating_reversal = 0.0;
  /// Cooling by a colder bath can be reversed only for bB <= this value (2 bS).
  double max_beta_b_omega_for_cooling_reversal = 0.0;
};

/// Defined for bS >= 0 only; nullopt otherwise.
std::optional<FeasibilityBounds> feasibility_bounds(double beta_s_omega);

struct Verdict {
  bool initial_reversal = false;
  bool permanent_reversal = false;
  double alpha_c = 0.0;
  double alpha_p = 0.0;
  double alpha_max = 0.0;
  /// Some admissible Re alpha reverses the initial flow (|alpha_c| <= alpha_max).
  bool feasible = false;
};

/// Pair-model verdict for Re alpha. Throws SingularThreshold for bB = 0.
Verdict evaluate(double beta_s_omega, double beta_b_omega, double re_alpha);

enum class AlphaPolicy { min, max, value };

AlphaPolicy parse_alpha_policy(const std::string& name);

struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  /// start, start + step, ... up to stop (inclusive within step/2).
  std::vector<double> values() const;
};

/// "a:b:h" or a single number "a".
Range parse_range(const std::string& text);

struct ScanGrid {
  Range beta_s;
  Range beta_b;
  /// beta_S follows beta_B; beta_s is ignored.
  bool diagonal = false;
  AlphaPolicy policy = AlphaPolicy::min;
  /// Used with AlphaPolicy::value.
  double re_alpha = 0.0;
};

struct ScanCell {
  double beta_s_omega = 0.0;
  double beta_b_omega = 0.0;
  double re_alpha = 0.0;
  Verdict verdict;
  /// NaN when re_alpha is outside the positivity bound for this beta_S.
  double delta_e = 0.0;
  double delta_s = 0.0;
};

/// Cells in row-major order (beta_S outer, beta_B inner). Cells at bB = 0
/// carry NaN thresholds and false verdicts.
std::vector<ScanCell> scan_region(const ScanGrid& grid);

}  // namespace qheat::reversal
