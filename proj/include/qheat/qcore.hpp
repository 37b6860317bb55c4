#pragma once

// Dense complex-matrix foundation and quantum-information primitives.
//
// Units: hbar = k_B = 1 and the transition frequency omega = 1, so every
// temperature appears as the dimensionless product omega*beta.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qheat {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Subsystem dimensions of a tensor-product space; empty when unstructured.
/// Subsystem 0 is the most significant factor (|a>|b> has index a*d1 + b).
using Layout = std::vector<std::size_t>;

inline constexpr double kStateTolerance = 1e-12;
inline constexpr double kIntegratedStateTolerance = 1e-9;

/// Largest |M - M^dagger| element.
double hermiticity_defect(const CMatrix& m);

/// Largest absolute element.
double max_abs(const CMatrix& m);

/// Tr(a b) without forming the product.
Complex trace_product(const CMatrix& a, const CMatrix& b);

/// Hermitian matrix with validated Hermiticity (symmetrized on construction).
class HermitianObservable {
 public:
  /// Throws InvalidInput when the Hermiticity defect exceeds `tol`.
  explicit HermitianObservable(CMatrix m, double tol = kStateTolerance);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }

 private:
  CMatrix matrix_;
};

/// Finite-dimensional quantum state: Hermitian, unit trace, positive.
class DensityOperator {
 public:
  /// Validates against `tol` (Hermiticity, trace, most negative eigenvalue)
  /// and symmetrizes. Throws PositivityError for a negative eigenvalue and
  /// InvalidInput for the other violations.
  explicit DensityOperator(CMatrix m, Layout layout = {}, double tol = kStateTolerance);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }
  const Layout& layout() const { return layout_; }

 private:
  CMatrix matrix_;
  Layout layout_;
};

/// Traceless Hermitian perturbation of a state (coherences, correlations).
class CoherenceTerm {
 public:
  explicit CoherenceTerm(CMatrix m, double tol = kStateTolerance);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }

 private:
  CMatrix matrix_;
};

/// Coherence term whose every single-subsystem partial trace vanishes, so it
/// changes no local state.
class CorrelationTerm {
 public:
  CorrelationTerm(CMatrix m, Layout layout, double tol = kStateTolerance);

  std::size_t dim() const { return term_.dim(); }
  const CMatrix& matrix() const { return term_.matrix(); }
  const Layout& layout() const { return layout_; }
  operator const CoherenceTerm&() const { return term_; }  // NOLINT: a correlation is a coherence

 private:
  CoherenceTerm term_;
  Layout layout_;
};

/// Reduced matrix on the subsystems in `keep` (any order; result follows
/// ascending subsystem index).
CMatrix partial_trace(const CMatrix& m, const Layout& layout, std::span<const std::size_t> keep);
DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep);

/// Ascending eigenvalues of a Hermitian matrix.
RVector hermitian_eigenvalues(const CMatrix& m);

/// -sum p ln p over a spectrum; eigenvalues below 1e-14 contribute 0.
double entropy_of_spectrum(std::span<const double> p);

/// Von Neumann entropy in nats.
double von_neumann_entropy(const DensityOperator& rho);

/// S(rho || sigma) in nats; +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);

/// I(1:2) = S_1 + S_2 - S_12 for a two-subsystem layout.
double mutual_information(const DensityOperator& rho);

struct DensityVerdict {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
  /// Human-readable description of each violated invariant.
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks a candidate state without throwing on physics violations.
/// Throws DimensionError for a non-square matrix.
DensityVerdict validate_density(const CMatrix& m, double tol = kStateTolerance);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Identity on `dim`.
CMatrix identity(std::size_t dim);

}  // namespace qheat
