// AVX2 + FMA variant of the Hamiltonian stencil.  Interior columns are
// processed four at a time; the k = 0 and k = K-1 edges (where cm/cp vanish
// but their neighbour loads would run out of the row) stay scalar.

#include <immintrin.h>

#include "dicke/kernels/ham_stencil.hpp"

namespace dicke::kernels {

namespace {

inline double edge_element(const HamStencil& h, const double* xu, const double* xd,
                           bool has_up, bool has_dn, double a, double b, int k) {
  const int K = h.n_k;
  double acc = 0.0;
  const double cpk = h.cp[k];
  const double cmk = h.cm[k];
  if (has_up) {
    if (k + 1 < K) acc += a * cpk * xu[k + 1];
    if (k > 0) acc += a * cmk * xu[k - 1];
  }
  if (has_dn) {
    if (k + 1 < K) acc += b * cpk * xd[k + 1];
    if (k > 0) acc += b * cmk * xd[k - 1];
  }
  return acc;
}

}  // namespace

void apply_avx2(const HamStencil& h, const double* x, double* y) {
  const int K = h.n_k;
  for (int nu = 0; nu < h.n_nu; ++nu) {
    const std::size_t row = static_cast<std::size_t>(nu) * K;
    const double* d = h.diag.data() + row;
    const double* xr = x + row;
    const double* xu = xr + K;
    const double* xd = xr - K;
    double* yr = y + row;

    const bool has_up = nu + 1 < h.n_nu;
    const bool has_dn = nu > 0;
    const double a = h.g * h.sqrt_nu[nu + 1];
    const double b = h.g * h.sqrt_nu[nu];

    yr[0] = d[0] * xr[0] + edge_element(h, xu, xd, has_up, has_dn, a, b, 0);
    if (K == 1) continue;

    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    int k = 1;
    for (; k + 4 <= K - 1; k += 4) {
      __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(d + k), _mm256_loadu_pd(xr + k));
      const __m256d vcp = _mm256_loadu_pd(h.cp.data() + k);
      const __m256d vcm = _mm256_loadu_pd(h.cm.data() + k);
      if (has_up) {
        acc = _mm256_fmadd_pd(_mm256_mul_pd(va, vcp), _mm256_loadu_pd(xu + k + 1), acc);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(va, vcm), _mm256_loadu_pd(xu + k - 1), acc);
      }
      if (has_dn) {
        acc = _mm256_fmadd_pd(_mm256_mul_pd(vb, vcp), _mm256_loadu_pd(xd + k + 1), acc);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(vb, vcm), _mm256_loadu_pd(xd + k - 1), acc);
      }
      _mm256_storeu_pd(yr + k, acc);
    }
    // scalar remainder, including the k = K-1 edge
    for (; k < K; ++k)
      yr[k] = d[k] * xr[k] + edge_element(h, xu, xd, has_up, has_dn, a, b, k);
  }
}

}  // namespace dicke::kernels
