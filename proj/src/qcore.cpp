#include "qheat/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qheat/error.hpp"

namespace qheat {
namespace {

constexpr double kZeroEigenvalue = 1e-14;

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

void require_layout(const Layout& layout, std::size_t dim, const char* what) {
  if (layout.empty()) {
    throw DimensionError(std::string(what) + ": tensor layout required");
  }
  const std::size_t prod =
      std::accumulate(layout.begin(), layout.end(), std::size_t{1}, std::multiplies<>());
  if (prod != dim) {
    throw DimensionError(std::string(what) + ": layout product does not match dimension");
  }
}

CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

double hermiticity_defect(const CMatrix& m) { return max_abs(m - m.adjoint()); }

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Complex trace_product(const CMatrix& a, const CMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix identity(std::size_t dim) {
  return CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

HermitianObservable::HermitianObservable(CMatrix m, double tol) {
  require_square(m, "HermitianObservable");
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw InvalidInput("observable is not Hermitian (defect " + fmt(defect) + ")");
  }
  matrix_ = hermitize(m);
}

DensityOperator::DensityOperator(CMatrix m, Layout layout, double tol) {
  require_square(m, "DensityOperator");
  if (!layout.empty()) require_layout(layout, static_cast<std::size_t>(m.rows()), "DensityOperator");
  const DensityVerdict verdict = validate_density(m, tol);
  if (!verdict.ok()) {
    std::string msg = "invalid density operator:";
    for (const auto& v : verdict.violations) msg += " " + v + ";";
    if (verdict.min_eigenvalue < -tol) throw PositivityError(msg, verdict.min_eigenvalue);
    throw InvalidInput(msg);
  }
  matrix_ = hermitize(m);
  layout_ = std::move(layout);
}

CoherenceTerm::CoherenceTerm(CMatrix m, double tol) {
  require_square(m, "CoherenceTerm");
  const double defect = hermiticity_defect(m);
  if (defect > tol) throw InvalidInput("coherence term is not Hermitian (defect " + fmt(defect) + ")");
  const double tr = std::abs(m.trace());
  if (tr > tol) throw InvalidInput("coherence term is not traceless (trace " + fmt(tr) + ")");
  matrix_ = hermitize(m);
}

CorrelationTerm::CorrelationTerm(CMatrix m, Layout layout, double tol)
    : term_(std::move(m), tol), layout_(std::move(layout)) {
  require_layout(layout_, term_.dim(), "CorrelationTerm");
  for (std::size_t k = 0; k < layout_.size(); ++k) {
    const std::size_t keep[] = {k};
    const double local = max_abs(partial_trace(term_.matrix(), layout_, keep));
    if (local > tol) {
      throw InvalidInput("correlation term changes the local state of subsystem " +
                         std::to_string(k) + " (" + fmt(local) + ")");
    }
  }
}

CMatrix partial_trace(const CMatrix& m, const Layout& layout, std::span<const std::size_t> keep) {
  require_square(m, "partial_trace");
  require_layout(layout, static_cast<std::size_t>(m.rows()), "partial_trace");
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  const std::size_t n_sub = layout.size();
  std::vector<bool> kept(n_sub, false);
  for (std::size_t k : keep) {
    if (k >= n_sub) throw DimensionError("partial_trace: subsystem index out of range");
    kept[k] = true;
  }

  // Strides of the full index, and of the reduced index over kept subsystems.
  std::vector<std::size_t> stride(n_sub), kept_stride(n_sub, 0);
  std::size_t s = 1, ks = 1;
  for (std::size_t k = n_sub; k-- > 0;) {
    stride[k] = s;
    s *= layout[k];
    if (kept[k]) {
      kept_stride[k] = ks;
      ks *= layout[k];
    }
  }
  const std::size_t dim = s;
  const std::size_t out_dim = ks;

  // Split each basis index into (kept part, traced part).
  std::vector<std::size_t> kept_idx(dim), traced_idx(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t kidx = 0, tidx = 0;
    for (std::size_t k = 0; k < n_sub; ++k) {
      const std::size_t digit = (i / stride[k]) % layout[k];
      if (kept[k]) {
        kidx += digit * kept_stride[k];
      } else {
        tidx = tidx * layout[k] + digit;
      }
    }
    kept_idx[i] = kidx;
    traced_idx[i] = tidx;
  }

  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(out_dim));
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      if (traced_idx[i] == traced_idx[j]) {
        out(static_cast<Eigen::Index>(kept_idx[i]), static_cast<Eigen::Index>(kept_idx[j])) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep) {
  CMatrix reduced = partial_trace(rho.matrix(), rho.layout(), keep);
  std::vector<std::size_t> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Layout sub;
  if (sorted.size() > 1) {
    for (std::size_t k : sorted) sub.push_back(rho.layout()[k]);
  }
  // Reduction of a valid state is valid up to accumulated rounding.
  return DensityOperator(std::move(reduced), std::move(sub), kIntegratedStateTolerance);
}

RVector hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double entropy_of_spectrum(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) {
    if (v > kZeroEigenvalue) s -= v * std::log(v);
  }
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
  const RVector ev = hermitian_eigenvalues(rho.matrix());
  return entropy_of_spectrum(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())));
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative_entropy: dimension mismatch");
  const RVector p = hermitian_eigenvalues(rho.matrix());
  Eigen::SelfAdjointEigenSolver<CMatrix> sig(sigma.matrix());
  const RVector& q = sig.eigenvalues();
  const CMatrix& v = sig.eigenvectors();

  double cross = 0.0;  // Tr rho ln sigma
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    const double weight = (v.col(j).adjoint() * rho.matrix() * v.col(j))(0, 0).real();
    if (q(j) <= kZeroEigenvalue) {
      if (weight > kZeroEigenvalue) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log(q(j));
  }
  const double neg_entropy =
      -entropy_of_spectrum(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
  return neg_entropy - cross;
}

double mutual_information(const DensityOperator& rho) {
  if (rho.layout().size() != 2) {
    throw DimensionError("mutual_information: state must carry a two-subsystem layout");
  }
  const std::size_t first[] = {0};
  const std::size_t second[] = {1};
  return von_neumann_entropy(partial_trace(rho, first)) +
         von_neumann_entropy(partial_trace(rho, second)) - von_neumann_entropy(rho);
}

DensityVerdict validate_density(const CMatrix& m, double tol) {
  require_square(m, "validate_density");
  DensityVerdict v;
  v.hermiticity_defect = hermiticity_defect(m);
  v.trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
  v.min_eigenvalue = hermitian_eigenvalues(hermitize(m)).minCoeff();
  if (v.hermiticity_defect > tol) v.violations.push_back("hermiticity defect " + fmt(v.hermiticity_defect));
  if (v.trace_defect > tol) v.violations.push_back("trace defect " + fmt(v.trace_defect));
  if (v.min_eigenvalue < -tol) v.violations.push_back("negative eigenvalue " + fmt(v.min_eigenvalue));
  return v;
}

}  // namespace qheat
