#pragma once

// Energy shells of a Hamiltonian and the eigenoperator (ladder) decomposition
// of a coupling observable: A(nu) = sum_{e_n' - e_n = nu} P_n A P_n'.

#include <vector>

#include "qheat/qcore.hpp"

namespace qheat {

inline constexpr double kDegeneracyTolerance = 1e-9;

/// One degenerate eigenspace of H.
struct EnergyShell {
  double energy = 0.0;
  std::size_t multiplicity = 0;
  CMatrix projector;
  /// Orthonormal eigenvectors spanning the shell, one per column.
  CMatrix basis;
};

/// Shells sorted by ascending energy. Consecutive eigenvalues whose gap is at
/// most tol * max(1, spectral range) share a shell.
std::vector<EnergyShell> spectral_groups(const HermitianObservable& h, double tol = kDegeneracyTolerance);

struct FrequencyComponent {
  /// Exact difference of two shell energies.
  double frequency = 0.0;
  CMatrix op;
};

/// Nonzero eigenoperators of `coupling`, sorted by frequency. Positive
/// frequencies lower the energy: [H, A(nu)] = -nu A(nu).
class EigenoperatorMap {
 public:
  explicit EigenoperatorMap(std::vector<FrequencyComponent> components)
      : components_(std::move(components)) {}

  const std::vector<FrequencyComponent>& components() const { return components_; }
  /// nullptr when `nu` carries no (nonzero) component within `tol`.
  const CMatrix* find(double nu, double tol = kDegeneracyTolerance) const;
  /// Sum over all components; reproduces the coupling observable.
  CMatrix sum() const;
  /// Distinct positive frequencies.
  std::vector<double> positive_frequencies() const;

 private:
  std::vector<FrequencyComponent> components_;
};

EigenoperatorMap build_eigenoperators(const HermitianObservable& h, const HermitianObservable& coupling,
                                      double tol = kDegeneracyTolerance);

/// Lowering/raising eigenoperators of a single-transition system.
class LadderPair {
 public:
  /// Verifies [H, A] = -omega A and [H, A^dagger] = +omega A^dagger to 1e-10
  /// (relative to the operator scale); throws InvalidInput otherwise.
  LadderPair(const HermitianObservable& h, double omega, CMatrix lowering);

  double frequency() const { return omega_; }
  std::size_t dim() const { return static_cast<std::size_t>(lowering_.rows()); }
  const CMatrix& lowering() const { return lowering_; }
  const CMatrix& raising() const { return raising_; }
  /// A A^dagger, whose expectation value weighs upward transitions.
  const CMatrix& up_weight() const { return up_weight_; }
  /// A^dagger A, whose expectation value weighs downward transitions.
  const CMatrix& down_weight() const { return down_weight_; }

 private:
  double omega_;
  CMatrix lowering_;
  CMatrix raising_;
  CMatrix up_weight_;
  CMatrix down_weight_;
};

/// Extracts A = A(+omega). Throws MultiFrequencyError if the coupling has any
/// other nonzero component (including nu = 0) and ZeroCouplingError if
/// A(+omega) vanishes.
LadderPair ladder_pair(const HermitianObservable& h, const HermitianObservable& coupling, double omega,
                       double tol = kDegeneracyTolerance);

/// Same, with omega taken as the unique positive frequency of the coupling.
LadderPair infer_ladder_pair(const HermitianObservable& h, const HermitianObservable& coupling,
                             double tol = kDegeneracyTolerance);

}  // namespace qheat
