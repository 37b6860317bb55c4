#include "kernels_impl.hpp"

namespace qheat::kernels {
namespace {

void gemm_scalar(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  for (std::size_t j = 0; j < n; ++j) {
    double* cj = cd + 2 * j * n;
    for (std::size_t i = 0; i < 2 * n; ++i) cj[i] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double br = bd[2 * (k + j * n)];
      const double bi = bd[2 * (k + j * n) + 1];
      const double* ak = ad + 2 * k * n;
      for (std::size_t i = 0; i < n; ++i) {
        cmul_acc(ak[2 * i], ak[2 * i + 1], br, bi, cj[2 * i], cj[2 * i + 1]);
      }
    }
  }
}

void axpy_scalar(std::size_t len, double alpha, const cplx* x, cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < 2 * len; ++i) yd[i] = yd[i] + alpha * xd[i];
}

void caxpy_scalar(std::size_t len, cplx alpha, const cplx* x, cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < len; ++i) {
    cmul_acc(xd[2 * i], xd[2 * i + 1], alpha.real(), alpha.imag(), yd[2 * i], yd[2 * i + 1]);
  }
}

constexpr KernelSet kScalar{Isa::scalar, gemm_scalar, axpy_scalar, caxpy_scalar};

}  // namespace

const KernelSet& scalar_kernels() { return kScalar; }

}  // namespace qheat::kernels
