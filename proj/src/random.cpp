#include "qheat/random.hpp"

#include <numeric>

namespace qheat::random {

CMatrix complex_matrix(Engine& rng, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = Complex(u(rng), u(rng));
  }
  return m;
}

CMatrix hermitian(Engine& rng, std::size_t dim) {
  const CMatrix m = complex_matrix(rng, dim);
  return (m + m.adjoint()) * 0.5;
}

namespace {

CMatrix gaussian(Engine& rng, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

}  // namespace

CMatrix unitary(Engine& rng, std::size_t dim) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian(rng, dim));
  CMatrix q = qr.householderQ();
  // Fix the phases so the distribution does not depend on the QR convention.
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

DensityOperator density(Engine& rng, std::size_t dim, Layout layout) {
  const CMatrix g = gaussian(rng, dim);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator((rho + rho.adjoint()) * 0.5, std::move(layout));
}

CorrelationTerm correlation(Engine& rng, const Layout& layout, double scale) {
  const std::size_t dim =
      std::accumulate(layout.begin(), layout.end(), std::size_t{1}, std::multiplies<>());
  CMatrix chi = hermitian(rng, dim);
  // P_k(X) = X - Tr_k(X) (x)_k I_k / d_k zeroes the partial trace over k and
  // keeps the partial traces already zeroed, so one pass over k suffices.
  for (std::size_t k = 0; k < layout.size(); ++k) {
    std::vector<std::size_t> others;
    for (std::size_t o = 0; o < layout.size(); ++o) {
      if (o != k) others.push_back(o);
    }
    if (others.empty()) {
      chi -= chi.trace() / static_cast<double>(dim) * identity(dim);
      continue;
    }
    // Tr_k(chi) lives on `others`; embed it with I_k / d_k at position k.
    const CMatrix reduced = partial_trace(chi, layout, others);
    const std::size_t dk = layout[k];
    std::size_t before = 1, after = 1;
    for (std::size_t o = 0; o < k; ++o) before *= layout[o];
    for (std::size_t o = k + 1; o < layout.size(); ++o) after *= layout[o];
    CMatrix embedded = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t b1 = 0; b1 < before; ++b1)
      for (std::size_t a1 = 0; a1 < after; ++a1)
        for (std::size_t b2 = 0; b2 < before; ++b2)
          for (std::size_t a2 = 0; a2 < after; ++a2) {
            const Complex v = reduced(static_cast<Eigen::Index>(b1 * after + a1),
                                      static_cast<Eigen::Index>(b2 * after + a2));
            for (std::size_t x = 0; x < dk; ++x) {
              const std::size_t row = (b1 * dk + x) * after + a1;
              const std::size_t col = (b2 * dk + x) * after + a2;
              embedded(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
                  v / static_cast<double>(dk);
            }
          }
    chi -= embedded;
  }
  chi = (chi + chi.adjoint()) * 0.5;
  const double m = max_abs(chi);
  if (m > 0.0) chi *= scale / m;
  return CorrelationTerm(std::move(chi), layout);
}

}  // namespace qheat::random
