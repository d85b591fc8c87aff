#include "dicke/projected.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dicke/mean_field.hpp"

namespace dicke {

namespace {

// Stable building blocks shared by all closed forms.  r = gamma_c/gamma < 1
// in the superradiant phase; every 1 +- F combination is formed through
// expm1 so the parity splitting survives F -> 1 and F -> 0.
struct ProjectedTerms {
  double x;            // (gamma_c/gamma)^4
  double one_minus_x;  // 1 - x, cancellation-free
  double log_f;
  double f;
  double one_plus_f;
  double one_minus_f;  // -expm1(log_f)
};

ProjectedTerms make_terms(const ModelParams& params) {
  const double gc = params.gamma_c();
  const double lr = std::log(gc / params.gamma);
  ProjectedTerms t;
  t.x = std::exp(4.0 * lr);
  t.one_minus_x = -std::expm1(4.0 * lr);
  t.log_f = 2.0 * params.n_atoms * lr -
            2.0 * params.n_atoms * params.gamma * params.gamma * t.one_minus_x;
  t.f = std::exp(t.log_f);
  t.one_plus_f = 1.0 + t.f;
  t.one_minus_f = -std::expm1(t.log_f);
  return t;
}

}  // namespace

OverlapFactor f_factor(int n_atoms, double gamma, double gamma_c) {
  if (n_atoms < 1) throw std::invalid_argument("f_factor: n_atoms must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("f_factor: gamma must be > 0");
  if (!(gamma_c > 0.0)) throw std::invalid_argument("f_factor: gamma_c must be > 0");

  const double lr = std::log(gamma_c / gamma);
  OverlapFactor r;
  r.log_f = 2.0 * n_atoms * lr -
            2.0 * n_atoms * gamma * gamma * (-std::expm1(4.0 * lr));
  r.f = std::exp(r.log_f);
  return r;
}

ObservableSet projected_observables(const ModelParams& params, Parity parity) {
  params.validate();
  if (!params.superradiant())
    throw std::domain_error(
        "projected_observables: defined for gamma > gamma_c only; the normal-phase "
        "symmetric ground state is |0> (x) |j,-j>");

  const ProjectedTerms t = make_terms(params);
  const double n = params.n_atoms;
  const double g2 = params.gamma * params.gamma;
  const bool even = parity == Parity::Even;

  const double denom = even ? t.one_plus_f : t.one_minus_f;  // 1 +- F
  const double inv_denom = 1.0 / denom;
  // F / (F +- 1): even -> F/(1+F), odd -> F/(F-1) = -F/(1-F)
  const double f_ratio = even ? t.f / t.one_plus_f : -t.f / t.one_minus_f;
  // (1 -+ F)/(1 +- F)
  const double flip_ratio = even ? t.one_minus_f / t.one_plus_f
                                 : t.one_plus_f / t.one_minus_f;

  ObservableSet o;
  o.energy = n * g2 * (t.x - 3.0 + 2.0 * t.one_minus_x * inv_denom);
  // <Jz>/N = -(gamma/gamma_c)^2 / 2 * (1 - (1-x)/(1 +- F)); the inner factor
  // reduces to (F + x)/(1+F) resp. (x - F)/(1-F), which is the form that
  // stays accurate when both x and F are tiny.
  const double inv_r2 = (params.gamma * params.gamma) /
                        (params.gamma_c() * params.gamma_c());
  const double inner = even ? (t.f + t.x) / t.one_plus_f : (t.x - t.f) / t.one_minus_f;
  o.jz = -0.5 * n * inv_r2 * inner;
  o.n_excited = 0.5 * n + o.jz;
  o.n_photons = n * g2 * t.one_minus_x * flip_ratio;
  o.q2 = 0.5 + 2.0 * n * g2 * t.one_minus_x * inv_denom;
  o.p2 = 0.5 - 2.0 * n * g2 * t.one_minus_x * f_ratio;
  o.var_q = o.q2;
  o.var_p = o.p2;
  o.jx2 = 0.25 * n * (1.0 + t.one_minus_x * (n - 1.0) * inv_denom);
  // (1 - x^{-1}) F = F - exp(log_f - 4 log r), formed in log space so the
  // x -> 0 limit neither overflows nor loses the sign
  const double lr = std::log(params.gamma_c() / params.gamma);
  const double f_over_x = std::exp(t.log_f - 4.0 * lr);
  const double jy_term = (t.f - f_over_x) * (even ? 1.0 / t.one_plus_f : -1.0 / t.one_minus_f);
  o.jy2 = 0.25 * n * (1.0 + (n - 1.0) * jy_term);
  o.xi_x2 = 4.0 * o.jx2 / n;
  o.xi_y2 = 4.0 * o.jy2 / n;
  o.first_moments_zero = true;  // quadratures and Jx, Jy flip the parity of lambda
  return o;
}

double projected_energy_splitting(const ModelParams& params) {
  params.validate();
  if (!params.superradiant())
    throw std::domain_error("projected_energy_splitting: requires gamma > gamma_c");
  const ProjectedTerms t = make_terms(params);
  const double n = params.n_atoms;
  // 1 - F^2 = -expm1(2 log F)
  const double one_minus_f2 = -std::expm1(2.0 * t.log_f);
  return 4.0 * n * params.gamma * params.gamma * t.one_minus_x * t.f / one_minus_f2;
}

ObservableSet deep_limit_observables(const ModelParams& params) {
  params.validate();
  const double n = params.n_atoms;
  const double g2 = params.gamma * params.gamma;

  ObservableSet o;
  o.n_photons = n * g2;
  o.n_excited = 0.5 * n;
  o.jz = 0.0;
  o.q2 = 2.0 * n * g2 + 0.5;
  o.p2 = 0.5;
  o.var_q = o.q2;
  o.var_p = o.p2;
  o.xi_x2 = n;
  o.xi_y2 = 1.0;
  o.jx2 = 0.25 * n * o.xi_x2;  // = N^2/4
  o.jy2 = 0.25 * n;
  // energy in the same limit: <H>/N -> -gamma^2 (1 + x) -> -gamma^2
  o.energy = -n * g2;
  o.first_moments_zero = true;
  return o;
}

int oracle_cutoff(const ModelParams& params) {
  const CriticalPointResult cp = critical_point(params);
  const double alpha2 = 0.5 * cp.point.q * cp.point.q;  // |alpha_c|^2
  return static_cast<int>(std::ceil(alpha2 + 10.0 * std::sqrt(alpha2) + 20.0));
}

std::vector<double> materialize_projected_state(const ModelParams& params, Parity parity,
                                                int nu_max) {
  params.validate();
  if (nu_max < 0) throw std::invalid_argument("materialize_projected_state: nu_max < 0");
  if (!params.superradiant())
    throw std::domain_error(
        "materialize_projected_state: projection applies in the superradiant phase; "
        "use the normal-phase ground state |0> (x) |j,-j> instead");

  const CriticalPointResult cp = critical_point(params);
  const double alpha = cp.point.q / std::sqrt(2.0);     // real, < 0
  const double zeta = std::tan(0.5 * cp.point.theta);   // real, in (0, 1]
  const double ln_abs_alpha = std::log(-alpha);
  const double ln_zeta = std::log(zeta);

  const int n_k = params.n_levels();
  const int two_j = params.n_atoms;
  const double lg2j = std::lgamma(two_j + 1.0);

  // ln coefficient and sign per (nu, k); only matching-parity slots are filled
  const std::size_t dim = static_cast<std::size_t>(nu_max + 1) * n_k;
  std::vector<double> ln_mag(dim, -std::numeric_limits<double>::infinity());
  const int want = static_cast<int>(parity);
  double ln_max = -std::numeric_limits<double>::infinity();

  for (int nu = 0; nu <= nu_max; ++nu) {
    const double ln_photon = nu * ln_abs_alpha - 0.5 * std::lgamma(nu + 1.0);
    for (int k = (nu + want) % 2 == 0 ? 0 : 1; k < n_k; k += 2) {
      // binom(2j, k)^{1/2} zeta^k on the spin side
      const double ln_binom =
          lg2j - std::lgamma(k + 1.0) - std::lgamma(two_j - k + 1.0);
      const double v = ln_photon + 0.5 * ln_binom + k * ln_zeta;
      ln_mag[static_cast<std::size_t>(nu) * n_k + k] = v;
      ln_max = std::max(ln_max, v);
    }
  }

  std::vector<double> coeffs(dim, 0.0);
  double norm2 = 0.0;
  for (int nu = 0; nu <= nu_max; ++nu) {
    const double sign = (nu % 2 == 0) ? 1.0 : -1.0;  // alpha_c < 0
    for (int k = 0; k < n_k; ++k) {
      const std::size_t i = static_cast<std::size_t>(nu) * n_k + k;
      if (!std::isfinite(ln_mag[i])) continue;
      const double c = sign * std::exp(ln_mag[i] - ln_max);
      coeffs[i] = c;
      norm2 += c * c;
    }
  }
  const double inv_norm = 1.0 / std::sqrt(norm2);
  for (double& c : coeffs) c *= inv_norm;

  // tail rule: the top Fock level must carry < 1e-12 probability
  double top_mass = 0.0;
  for (int k = 0; k < n_k; ++k) {
    const double c = coeffs[static_cast<std::size_t>(nu_max) * n_k + k];
    top_mass += c * c;
  }
  if (top_mass >= 1e-12)
    throw std::invalid_argument(
        "materialize_projected_state: nu_max too small, top Fock level carries >= 1e-12");

  return coeffs;
}

MaterializedState materialize_projected_state_auto(const ModelParams& params,
                                                   Parity parity) {
  int nu_max = oracle_cutoff(params);
  for (int attempt = 0; attempt < 40; ++attempt) {
    try {
      return MaterializedState{materialize_projected_state(params, parity, nu_max), nu_max};
    } catch (const std::invalid_argument&) {
      nu_max += (nu_max + 1) / 2;  // grow by 50%
    }
  }
  throw std::runtime_error("materialize_projected_state_auto: cutoff did not converge");
}

}  // namespace dicke
