#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "dicke/kernels/ham_stencil.hpp"

namespace dicke::kernels {

bool cpu_has_avx2() {
#if DICKE_HAVE_AVX2_KERNEL
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

ApplyFn pick() {
  const char* forced = std::getenv("DICKE_SIMD");
  if (forced != nullptr) {
    if (std::strcmp(forced, "scalar") == 0) return apply_scalar;
#if DICKE_HAVE_AVX2_KERNEL
    if (std::strcmp(forced, "avx2") == 0) {
      if (!cpu_has_avx2()) throw std::runtime_error("DICKE_SIMD=avx2: cpu lacks avx2/fma");
      return apply_avx2;
    }
#endif
    throw std::runtime_error(std::string("DICKE_SIMD: unknown kernel '") + forced + "'");
  }
#if DICKE_HAVE_AVX2_KERNEL
  if (cpu_has_avx2()) return apply_avx2;
#endif
  return apply_scalar;
}

}  // namespace

ApplyFn select_apply() {
  static const ApplyFn fn = pick();
  return fn;
}

const char* selected_kernel_name() {
#if DICKE_HAVE_AVX2_KERNEL
  if (select_apply() == apply_avx2) return "avx2";
#endif
  return "scalar";
}

void apply(const HamStencil& h, const double* x, double* y) {
  select_apply()(h, x, y);
}

}  // namespace dicke::kernels
