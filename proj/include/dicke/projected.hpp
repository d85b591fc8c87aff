#pragma once

#include <vector>

#include "dicke/observables.hpp"
#include "dicke/params.hpp"

namespace dicke {

// Overlap-derived factor controlling every finite-N correction in the
// projected formulas:
//   log F = 2N ln(gamma_c/gamma) - 2N gamma^2 (1 - (gamma_c/gamma)^4).
// F underflows to 0 for large N by design; all consumers work from log_f.
struct OverlapFactor {
  double log_f = 0.0;
  double f = 1.0;
};

OverlapFactor f_factor(int n_atoms, double gamma, double gamma_c);

// Closed-form observables of the even/odd lambda-parity projected coherent
// state at the superradiant critical point.  Defined for gamma > gamma_c
// only; throws std::domain_error otherwise (at and below gamma_c the odd
// norm 1 - F is not positive).
ObservableSet projected_observables(const ModelParams& params, Parity parity);

// <H>_odd - <H>_even = 4 N gamma^2 (1 - (gamma_c/gamma)^4) F / (1 - F^2),
// evaluated in log space so the doublet splitting stays resolvable long
// after the two energies are equal to double precision.
double projected_energy_splitting(const ModelParams& params);

// Limiting forms for gamma_c/gamma -> 0.
ObservableSet deep_limit_observables(const ModelParams& params);

// Brute-force materialization of the projected trial state as an explicit
// normalized vector over the full (unfiltered) canonical basis with photon
// cutoff nu_max.  Coefficients are accumulated in log-magnitude + sign form.
// Throws std::domain_error in the normal phase (the symmetric ground state
// there is |0> (x) |j,-j>), and std::invalid_argument when the cutoff leaves
// more than 1e-12 probability on the top Fock level.
std::vector<double> materialize_projected_state(const ModelParams& params, Parity parity,
                                                int nu_max);

// Poisson-tail cutoff rule: ceil(|alpha_c|^2 + 10 sqrt(|alpha_c|^2) + 20).
int oracle_cutoff(const ModelParams& params);

struct MaterializedState {
  std::vector<double> coeffs;
  int nu_max = 0;
};

// oracle_cutoff + materialize, growing the cutoff by 50% until the top-level
// tail is below 1e-12.
MaterializedState materialize_projected_state_auto(const ModelParams& params, Parity parity);

}  // namespace dicke
