#pragma once

// Matrix-free form of the Dicke Hamiltonian on the full product basis in
// canonical layout (row nu, column k, flat index nu*(2j+1) + k).  Each row
// couples to at most four neighbours (nu +- 1, k +- 1), so y = H x is a
// regular 5-point stencil over a (nu_max+1) x (2j+1) grid.
//
// The coupling never changes the parity of nu + k: a vector supported on one
// parity sector stays in that sector under apply() with exact zeros outside.
//
// Two kernels implement the same contract: a scalar reference and an
// AVX2+FMA variant picked at runtime.  They are equivalence-tested against
// each other and against the dense assembly.

#include <cstddef>
#include <vector>

#include "dicke/params.hpp"

namespace dicke::kernels {

struct HamStencil {
  int n_nu = 0;  // nu_max + 1 rows
  int n_k = 0;   // 2j + 1 columns
  double g = 0;  // gamma / sqrt(N)

  std::vector<double> diag;     // nu + omega_a (k - j), flat layout
  std::vector<double> sqrt_nu;  // sqrt(nu) for nu in [0, n_nu]
  std::vector<double> cp;       // C+(j, k - j); cp[n_k - 1] = 0
  std::vector<double> cm;       // C-(j, k - j) = cp[k - 1]; cm[0] = 0

  std::size_t dim() const { return static_cast<std::size_t>(n_nu) * n_k; }
};

HamStencil make_stencil(const ModelParams& params, int nu_max);

using ApplyFn = void (*)(const HamStencil&, const double*, double*);

// y = H x, scalar reference kernel.
void apply_scalar(const HamStencil& h, const double* x, double* y);

#if DICKE_HAVE_AVX2_KERNEL
// y = H x, AVX2 + FMA kernel.  Call only when cpu_has_avx2() is true.
void apply_avx2(const HamStencil& h, const double* x, double* y);
#endif

bool cpu_has_avx2();

// Best kernel for this machine.  DICKE_SIMD=scalar forces the reference
// kernel; DICKE_SIMD=avx2 demands the vector one (throws if unsupported).
ApplyFn select_apply();
const char* selected_kernel_name();

// y = H x with the dispatched kernel (selection cached on first use).
void apply(const HamStencil& h, const double* x, double* y);

}  // namespace dicke::kernels
