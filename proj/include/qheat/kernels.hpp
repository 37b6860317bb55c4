#pragma once

// Dense complex kernels behind the Lindblad right-hand side.
//
// Matrices are n x n, column-major, std::complex<double> (Eigen's MatrixXcd
// storage). Every variant performs the same floating-point operations in the
// same order without fused multiply-add, so all variants produce
// bit-identical results.

#include <complex>
#include <cstddef>
#include <string_view>

namespace qheat::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelSet {
  Isa isa;
  /// c = a * b
  void (*gemm)(std::size_t n, const cplx* a, const cplx* b, cplx* c);
  /// y += alpha * x over `len` complex entries
  void (*axpy)(std::size_t len, double alpha, const cplx* x, cplx* y);
  /// y += alpha * x, complex alpha
  void (*caxpy)(std::size_t len, cplx alpha, const cplx* x, cplx* y);
};

const KernelSet& scalar_kernels();
/// nullptr when the variant was not compiled in.
const KernelSet* avx2_kernels();

/// Compiled in and supported by the running CPU.
bool available(Isa isa);

/// Kernel set used by the library. Chosen on first use: the best available
/// ISA, unless the environment variable QHEAT_ISA names another one
/// ("scalar" or "avx2").
const KernelSet& active();

/// Override the runtime choice. Throws InvalidInput if `isa` is unavailable.
void select(Isa isa);

}  // namespace qheat::kernels
