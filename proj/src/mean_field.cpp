#include "dicke/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace dicke {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// 1 - (gamma_c/gamma)^4 without cancellation near the transition.
double one_minus_ratio4(double gamma_c, double gamma) {
  return -std::expm1(4.0 * std::log(gamma_c / gamma));
}

}  // namespace

VariationalPoint canonicalize(const VariationalPoint& v) {
  VariationalPoint r = v;
  // fold theta into [0, pi]; each fold shifts phi by pi to keep the surface value
  double t = std::fmod(r.theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t > 3.141592653589793) {
    t = kTwoPi - t;
    r.phi += 3.141592653589793;
  }
  r.theta = t;
  double f = std::fmod(r.phi, kTwoPi);
  if (f < 0) f += kTwoPi;
  r.phi = f;
  return r;
}

double energy_surface(const ModelParams& params, const VariationalPoint& v) {
  params.validate();
  const double n = params.n_atoms;
  return (v.p * v.p + v.q * v.q) / (2.0 * n) - 0.5 * params.omega_a * std::cos(v.theta) +
         std::sqrt(2.0) * params.gamma / std::sqrt(n) * v.q * std::sin(v.theta) *
             std::cos(v.phi);
}

std::array<double, 4> energy_gradient(const ModelParams& params, const VariationalPoint& v) {
  const double n = params.n_atoms;
  const double c = std::sqrt(2.0) * params.gamma / std::sqrt(n);
  const double st = std::sin(v.theta);
  const double ct = std::cos(v.theta);
  const double cf = std::cos(v.phi);
  return {
      v.q / n + c * st * cf,
      v.p / n,
      0.5 * params.omega_a * st + c * v.q * ct * cf,
      -c * v.q * st * std::sin(v.phi),
  };
}

CriticalPointResult critical_point(const ModelParams& params) {
  params.validate();
  CriticalPointResult r;
  r.gamma_c = params.gamma_c();

  if (!params.superradiant()) {
    // normal phase (boundary included: both branches coincide at gamma_c)
    r.phase = Phase::Normal;
    r.point = VariationalPoint{0.0, 0.0, 0.0, 0.0};
    r.energy_per_atom = -0.5 * params.omega_a;
    return r;
  }

  const double ratio2 = (r.gamma_c * r.gamma_c) / (params.gamma * params.gamma);
  r.phase = Phase::Superradiant;
  // theta_c = arccos(omega_a / (4 gamma^2)) = arccos((gamma_c/gamma)^2)
  r.point.theta = std::acos(std::min(1.0, ratio2));
  r.point.phi = 0.0;
  r.point.p = 0.0;
  r.point.q = -std::sqrt(2.0 * params.n_atoms) * params.gamma *
              std::sqrt(one_minus_ratio4(r.gamma_c, params.gamma));
  const double x = std::pow(r.gamma_c / params.gamma, 4);
  r.energy_per_atom = -params.gamma * params.gamma * (x + 1.0);
  return r;
}

ObservableSet mean_field_observables(const ModelParams& params) {
  params.validate();
  const CriticalPointResult cp = critical_point(params);
  const double n = params.n_atoms;
  const double j = params.j();

  ObservableSet o;
  if (cp.phase == Phase::Normal) {
    // photon vacuum, all atoms in the lower level
    o.energy = n * cp.energy_per_atom;
    o.n_photons = 0.0;
    o.n_excited = 0.0;
    o.jz = -j;
    o.q2 = o.p2 = 0.5;
    o.var_q = o.var_p = 0.5;
    o.jx2 = o.jy2 = 0.5 * j;
    o.xi_x2 = o.xi_y2 = 1.0;
    o.first_moments_zero = true;
    return o;
  }

  const double gc = cp.gamma_c;
  const double g = params.gamma;
  const double ratio2 = (gc / g) * (gc / g);
  const double one_minus_x = one_minus_ratio4(gc, g);

  o.energy = n * cp.energy_per_atom;
  o.n_photons = n * g * g * one_minus_x;  // = |alpha_c|^2 = q_c^2 / 2
  o.n_excited = 0.5 * n * (1.0 - ratio2);
  o.jz = o.n_excited - j;
  // coherent state: variances 1/2, displaced along q only
  o.var_q = o.var_p = 0.5;
  o.q2 = cp.point.q * cp.point.q + 0.5;
  o.p2 = 0.5;
  // lab-frame spin moments of the coherent spin state at (theta_c, phi_c = 0)
  const double x = ratio2 * ratio2;
  o.jx2 = 0.25 * n * n - 0.25 * n * (n - 1.0) * x;
  o.jy2 = 0.25 * n;
  // (Delta Jx)^2 = jx2 - <Jx>^2 = (N/4) x with <Jx> = j sin(theta_c);
  // Jy is fully perpendicular to the mean spin, (Delta Jy)^2 = j/2
  o.xi_x2 = x;
  o.xi_y2 = 1.0;
  o.first_moments_zero = false;  // <q> = q_c, <Jx> = j sin(theta_c)
  return o;
}

std::vector<VariationalPoint> default_seeds(const ModelParams& params, int count,
                                            unsigned long long seed) {
  std::mt19937_64 rng(seed);
  const double q_scale =
      std::sqrt(2.0 * params.n_atoms) * std::max(1.0, params.gamma) * 2.0;
  std::uniform_real_distribution<double> uq(-q_scale, q_scale);
  std::uniform_real_distribution<double> ut(0.0, 3.141592653589793);
  std::uniform_real_distribution<double> uf(0.0, kTwoPi);

  std::vector<VariationalPoint> seeds;
  seeds.push_back(VariationalPoint{});  // origin
  for (int i = 0; i < count; ++i)
    seeds.push_back(VariationalPoint{uq(rng), uq(rng), ut(rng), uf(rng)});
  return seeds;
}

namespace {

struct Vec4 : std::array<double, 4> {};

double max_abs(const std::array<double, 4>& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

// BFGS with Armijo backtracking on the unconstrained (q, p, theta, phi)
// chart; the surface is smooth and periodic in the angles, so folding is
// deferred to the end.
struct LocalResult {
  VariationalPoint point;
  double energy;
  double grad_norm;
  bool converged;
};

LocalResult minimize_from(const ModelParams& params, VariationalPoint x0, double tol,
                          long max_iter) {
  auto value = [&](const VariationalPoint& v) { return energy_surface(params, v); };
  auto grad = [&](const VariationalPoint& v) { return energy_gradient(params, v); };

  std::array<double, 4> x{x0.q, x0.p, x0.theta, x0.phi};
  auto as_point = [](const std::array<double, 4>& a) {
    return VariationalPoint{a[0], a[1], a[2], a[3]};
  };

  double f = value(as_point(x));
  std::array<double, 4> g = grad(as_point(x));

  // inverse-Hessian approximation, identity start
  double h[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};

  long iter = 0;
  while (max_abs(g) > tol && iter < max_iter) {
    ++iter;
    std::array<double, 4> d{};
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) d[i] -= h[i][k] * g[k];

    double slope = 0.0;
    for (int i = 0; i < 4; ++i) slope += d[i] * g[i];
    if (slope >= 0.0) {
      // reset to steepest descent if the model went indefinite
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) h[i][k] = (i == k) ? 1.0 : 0.0;
      for (int i = 0; i < 4; ++i) d[i] = -g[i];
      slope = 0.0;
      for (int i = 0; i < 4; ++i) slope += d[i] * g[i];
    }

    double step = 1.0;
    std::array<double, 4> xn;
    double fn = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (int i = 0; i < 4; ++i) xn[i] = x[i] + step * d[i];
      fn = value(as_point(xn));
      if (fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stall: gradient tolerance decides below

    const std::array<double, 4> gn = grad(as_point(xn));
    std::array<double, 4> s, y;
    double sy = 0.0;
    for (int i = 0; i < 4; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
      sy += s[i] * y[i];
    }
    if (sy > 1e-12) {
      // BFGS update of the inverse Hessian
      const double rho = 1.0 / sy;
      double hy[4];
      for (int i = 0; i < 4; ++i) {
        hy[i] = 0.0;
        for (int k = 0; k < 4; ++k) hy[i] += h[i][k] * y[k];
      }
      double yhy = 0.0;
      for (int i = 0; i < 4; ++i) yhy += y[i] * hy[i];
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
          h[i][k] += rho * ((1.0 + rho * yhy) * s[i] * s[k] - hy[i] * s[k] - s[i] * hy[k]);
    }

    x = xn;
    f = fn;
    g = gn;
  }

  LocalResult r;
  r.point = as_point(x);
  r.energy = f;
  r.grad_norm = max_abs(g);
  r.converged = r.grad_norm <= tol;
  return r;
}

}  // namespace

VariationalPoint minimize_surface(const ModelParams& params,
                                  std::span<const VariationalPoint> seeds, double tol,
                                  const MinimizeOptions& opts) {
  params.validate();
  if (seeds.empty()) throw std::invalid_argument("minimize_surface: need at least one seed");
  if (!(tol > 0.0)) throw std::invalid_argument("minimize_surface: tol must be > 0");

  bool any_converged = false;
  LocalResult best;
  best.energy = std::numeric_limits<double>::infinity();
  best.converged = false;

  const long per_seed = std::max<long>(1, opts.max_iter / static_cast<long>(seeds.size()));
  for (const VariationalPoint& s : seeds) {
    const LocalResult r = minimize_from(params, s, tol, per_seed);
    if (r.converged && (!any_converged || r.energy < best.energy)) {
      best = r;
      any_converged = true;
    } else if (!any_converged && r.energy < best.energy) {
      best = r;
    }
  }

  if (!any_converged)
    throw MinimizeError("minimize_surface: no seed reached the gradient tolerance",
                        canonicalize(best.point), best.energy);
  return canonicalize(best.point);
}

}  // namespace dicke
