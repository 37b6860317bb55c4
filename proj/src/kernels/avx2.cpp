#include <immintrin.h>

#include "kernels_impl.hpp"

namespace qheat::kernels {
namespace {

// x = [xr0, xi0, xr1, xi1], y broadcast as (yr, yi):
//   addsub(x*yr, swap(x)*yi) = [xr*yr - xi*yi, xi*yr + xr*yi, ...]
inline __m256d cmul(__m256d x, __m256d yr, __m256d yi) {
  const __m256d t1 = _mm256_mul_pd(x, yr);
  const __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(x, 0b0101), yi);
  return _mm256_addsub_pd(t1, t2);
}

void gemm_avx2(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  const std::size_t n2 = n - n % 2;
  for (std::size_t j = 0; j < n; ++j) {
    double* cj = cd + 2 * j * n;
    for (std::size_t i = 0; i < 2 * n; ++i) cj[i] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double br = bd[2 * (k + j * n)];
      const double bi = bd[2 * (k + j * n) + 1];
      const __m256d vbr = _mm256_set1_pd(br);
      const __m256d vbi = _mm256_set1_pd(bi);
      const double* ak = ad + 2 * k * n;
      std::size_t i = 0;
      for (; i < n2; i += 2) {
        const __m256d x = _mm256_loadu_pd(ak + 2 * i);
        const __m256d acc = _mm256_loadu_pd(cj + 2 * i);
        _mm256_storeu_pd(cj + 2 * i, _mm256_add_pd(acc, cmul(x, vbr, vbi)));
      }
      for (; i < n; ++i) {
        cmul_acc(ak[2 * i], ak[2 * i + 1], br, bi, cj[2 * i], cj[2 * i + 1]);
      }
    }
  }
}

void axpy_avx2(std::size_t len, double alpha, const cplx* x, cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const std::size_t m = 2 * len;
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d vy = _mm256_loadu_pd(yd + i);
    const __m256d vx = _mm256_loadu_pd(xd + i);
    _mm256_storeu_pd(yd + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (; i < m; ++i) yd[i] = yd[i] + alpha * xd[i];
}

void caxpy_avx2(std::size_t len, cplx alpha, const cplx* x, cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d var = _mm256_set1_pd(alpha.real());
  const __m256d vai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const __m256d vx = _mm256_loadu_pd(xd + 2 * i);
    const __m256d vy = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(vy, cmul(vx, var, vai)));
  }
  for (; i < len; ++i) {
    cmul_acc(xd[2 * i], xd[2 * i + 1], alpha.real(), alpha.imag(), yd[2 * i], yd[2 * i + 1]);
  }
}

constexpr KernelSet kAvx2{Isa::avx2, gemm_avx2, axpy_avx2, caxpy_avx2};

}  // namespace

const KernelSet* avx2_kernels() { return &kAvx2; }

}  // namespace qheat::kernels
