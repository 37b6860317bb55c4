#pragma once

// Closed forms for a pair of resonant two-level systems coupled collectively
// through S- = s1- + s2-.
//
// Computational basis |00>, |01>, |10>, |11> (subsystem 1 first, |0> ground).
// Collective basis psi0 = |00>, psi+ = (|01> + |10>)/sqrt2,
// psi- = (|01> - |10>)/sqrt2, psi1 = |11>.
//
// With x = e^{-omega beta}: Z(beta) = (1 + x)^2 and
// z(beta) = (1 + x + x^2) / Z(beta).

#include <array>
#include <complex>
#include <vector>

#include "qheat/eigenops.hpp"
#include "qheat/qcore.hpp"

namespace qheat::pair {

/// Indices of the collective basis states in `collective_basis()` columns.
enum CollectiveIndex : int { kPsi0 = 0, kPsiPlus = 1, kPsiMinus = 2, kPsi1 = 3 };

/// Columns are psi0, psi+, psi-, psi1 in the computational basis.
const CMatrix& collective_basis();

/// H_S = omega (s1+ s1- + s2+ s2-) with omega = 1.
const HermitianObservable& hamiltonian();
/// Local lowering operator |0><1| of a single two-level system.
const CMatrix& local_lowering();
/// S- = s1- + s2-.
const CMatrix& collective_lowering();
/// Ladder pair (omega = 1) of the collective coupling S+ + S-.
const LadderPair& collective_ladder();
const Layout& layout();

double partition(double beta_omega);      ///< Z(beta) = (1 + e^{-b})^2
double z(double beta_omega);              ///< (1 + x + x^2)/Z
double thermal_energy(double beta_omega); ///< 2x/(1 + x), the energy of the product thermal state
double alpha_max(double beta_omega);      ///< x / Z, the positivity bound on |alpha|

/// Thermal pair upgraded by chi = alpha |01><10| + alpha* |10><01|.
struct PairConfig {
  double beta_s_omega = 1.0;
  std::complex<double> alpha{0.0, 0.0};

  double phi() const { return std::arg(alpha); }
};

/// Throws PositivityError (with the would-be smallest eigenvalue) when
/// |alpha| exceeds alpha_max by more than 1e-12.
void validate(const PairConfig& cfg);

/// Single two-level thermal state diag(1, x)/(1 + x).
CMatrix thermal_tls(double beta_omega);

/// The correlation term chi for a given alpha.
CorrelationTerm correlation_term(std::complex<double> alpha);

DensityOperator initial_state(const PairConfig& cfg);

/// Populations of psi0, psi+, psi-, psi1 (indexed by CollectiveIndex).
std::array<double, 4> collective_populations(const CMatrix& rho);

/// r = p0 + p+ + p1 = z(beta_S) + Re alpha for an initial state of this form.
double r_constant(const PairConfig& cfg);

/// r/(1 + x + x^2) (|psi0><psi0| + x |psi+><psi+| + x^2 |psi1><psi1|) + (1 - r)|psi-><psi-|,
/// x = e^{-omega beta_B}. Throws InvalidInput for r outside [0, 1].
DensityOperator steady_state(double beta_b_omega, double r);

/// E_inf / omega = 1 + (Re alpha + z(beta_S)) (x_B^2 - 1)/(1 + x_B + x_B^2).
/// Throws InvalidInput when |re_alpha| > alpha_max(beta_S).
double steady_energy(double beta_s_omega, double beta_b_omega, double re_alpha);

/// Entropy of the steady state from its eigenvalues:
/// r ln((1 + x + x^2)/r) + r omega beta_B (x + 2x^2)/(1 + x + x^2) - (1 - r) ln(1 - r).
double steady_entropy(double beta_b_omega, double r);

/// Entropy of the initial state, eigenvalues {x^2/Z, 1/Z, x/Z + |alpha|, x/Z - |alpha|}.
double initial_entropy(double beta_s_omega, double abs_alpha);

struct SteadyReport {
  double e_inf_over_omega = 0.0;
  double s_inf = 0.0;
  double e0_over_omega = 0.0;
  double s0 = 0.0;
  double delta_e = 0.0;
  double delta_s = 0.0;
  double r = 0.0;
};

SteadyReport steady_report(const PairConfig& cfg, double beta_b_omega);

/// Re alpha giving the largest permanent reversal at beta_S = beta_B:
/// -alpha_max for beta_B >= 0, +alpha_max for an inverted bath.
double reversing_alpha(double beta_b_omega);

struct MaxReversalPoint {
  double beta_b_omega = 0.0;
  double re_alpha = 0.0;
  double delta_e = 0.0;
  double delta_e_over_e0 = 0.0;
};

/// Delta E = E_inf(beta_B, beta_B, reversing_alpha) - E0(beta_B) along a grid.
std::vector<MaxReversalPoint> max_reversal_curve(const std::vector<double>& beta_b_grid);

}  // namespace qheat::pair
