#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "qheat/error.hpp"

namespace qheat::kernels {

#ifndef QHEAT_HAVE_AVX2
const KernelSet* avx2_kernels() { return nullptr; }
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(QHEAT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

namespace {

const KernelSet& kernels_for(Isa isa) {
  if (isa == Isa::avx2) return *avx2_kernels();
  return scalar_kernels();
}

const KernelSet* initial_choice() {
  if (const char* env = std::getenv("QHEAT_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && available(Isa::avx2)) return avx2_kernels();
  }
  if (available(Isa::avx2)) return avx2_kernels();
  return &scalar_kernels();
}

std::atomic<const KernelSet*>& slot() {
  static std::atomic<const KernelSet*> current{initial_choice()};
  return current;
}

}  // namespace

const KernelSet& active() { return *slot().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (!available(isa)) {
    throw InvalidInput("kernel variant '" + std::string(isa_name(isa)) +
                       "' is not available on this build/CPU");
  }
  slot().store(&kernels_for(isa), std::memory_order_release);
}

}  // namespace qheat::kernels
