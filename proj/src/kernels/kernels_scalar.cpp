#include <cmath>

#include "dicke/kernels/ham_stencil.hpp"

namespace dicke::kernels {

HamStencil make_stencil(const ModelParams& params, int nu_max) {
  params.validate();
  HamStencil h;
  h.n_nu = nu_max + 1;
  h.n_k = params.n_levels();
  h.g = params.gamma / std::sqrt(static_cast<double>(params.n_atoms));

  const double j = params.j();
  h.diag.resize(h.dim());
  for (int nu = 0; nu <= nu_max; ++nu)
    for (int k = 0; k < h.n_k; ++k)
      h.diag[static_cast<std::size_t>(nu) * h.n_k + k] = nu + params.omega_a * (k - j);

  h.sqrt_nu.resize(h.n_nu + 1);
  for (int nu = 0; nu <= h.n_nu; ++nu) h.sqrt_nu[nu] = std::sqrt(static_cast<double>(nu));

  h.cp.assign(h.n_k, 0.0);
  h.cm.assign(h.n_k, 0.0);
  for (int k = 0; k + 1 < h.n_k; ++k) {
    const double m = k - j;
    h.cp[k] = std::sqrt(j * (j + 1) - m * (m + 1));
    h.cm[k + 1] = h.cp[k];
  }
  return h;
}

void apply_scalar(const HamStencil& h, const double* x, double* y) {
  const int K = h.n_k;
  for (int nu = 0; nu < h.n_nu; ++nu) {
    const std::size_t row = static_cast<std::size_t>(nu) * K;
    const double* d = h.diag.data() + row;
    const double* xr = x + row;
    const double* xu = xr + K;  // row nu + 1
    const double* xd = xr - K;  // row nu - 1
    double* yr = y + row;

    const bool has_up = nu + 1 < h.n_nu;
    const bool has_dn = nu > 0;
    const double a = h.g * h.sqrt_nu[nu + 1];
    const double b = h.g * h.sqrt_nu[nu];

    for (int k = 0; k < K; ++k) {
      double acc = d[k] * xr[k];
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
      yr[k] = acc;
    }
  }
}

}  // namespace dicke::kernels
