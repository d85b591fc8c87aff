#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "dicke/observables.hpp"
#include "dicke/params.hpp"

namespace dicke {

// Phase-space coordinates of the coherent trial state: alpha = (q + i p)/sqrt(2)
// for the field, (theta, phi) on the Bloch sphere for the collective spin.
struct VariationalPoint {
  double q = 0.0;
  double p = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

// Fold into the canonical ranges theta in [0, pi], phi in [0, 2 pi).  The
// fold preserves the energy surface value.
VariationalPoint canonicalize(const VariationalPoint& v);

enum class Phase { Normal, Superradiant };

struct CriticalPointResult {
  Phase phase = Phase::Normal;
  VariationalPoint point;
  double energy_per_atom = 0.0;
  double gamma_c = 0.0;
};

// Energy per atom of the coherent trial state:
//   (p^2 + q^2)/(2N) - (omega_a/2) cos(theta) + sqrt(2) gamma/sqrt(N) q sin(theta) cos(phi)
double energy_surface(const ModelParams& params, const VariationalPoint& v);

// Analytic gradient of energy_surface w.r.t. (q, p, theta, phi).
std::array<double, 4> energy_gradient(const ModelParams& params, const VariationalPoint& v);

// Global minimum of the surface, classified by phase.  The superradiant
// minimum is reported as the phi = 0, q <= 0 representative of the Z2 pair.
CriticalPointResult critical_point(const ModelParams& params);

// Coherent-state observables at the critical point.
ObservableSet mean_field_observables(const ModelParams& params);

struct MinimizeOptions {
  double tol = 1e-8;      // max-norm of the gradient at the solution
  long max_iter = 100000;  // total iteration budget per seed
};

// Thrown when no seed reaches the gradient tolerance; carries the best point.
struct MinimizeError : std::runtime_error {
  VariationalPoint best_point;
  double best_energy;
  MinimizeError(const std::string& msg, const VariationalPoint& pt, double e)
      : std::runtime_error(msg), best_point(pt), best_energy(e) {}
};

// Multi-start quasi-Newton descent over (q, p, theta, phi); returns the
// lowest local minimum found across the seeds, canonicalized.
VariationalPoint minimize_surface(const ModelParams& params,
                                  std::span<const VariationalPoint> seeds,
                                  double tol = 1e-8,
                                  const MinimizeOptions& opts = {});

// Deterministic seed set for the multi-start search: the origin plus `count`
// pseudo-random points spanning the relevant (q, p) range.
std::vector<VariationalPoint> default_seeds(const ModelParams& params, int count,
                                            unsigned long long seed = 0x9e3779b9ULL);

}  // namespace dicke
