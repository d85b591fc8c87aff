#pragma once

#include <cmath>
#include <stdexcept>

namespace dicke {

// Parity of the total excitation count lambda = j + m + nu.  The Hamiltonian
// conserves it, splitting the Hilbert space into two uncoupled blocks.
enum class Parity : int { Even = 0, Odd = 1 };

inline Parity parity_of(long lambda) {
  return (lambda % 2 == 0) ? Parity::Even : Parity::Odd;
}

inline int parity_sign(Parity p) { return p == Parity::Even ? +1 : -1; }

inline const char* parity_name(Parity p) {
  return p == Parity::Even ? "even" : "odd";
}

// Physical inputs.  Energies are measured in units of the field frequency:
// omega_a is the atomic level splitting and gamma the collective coupling,
// both dimensionless.  The pseudospin length is fixed at j = N/2.
struct ModelParams {
  int n_atoms = 1;
  double omega_a = 1.0;
  double gamma = 0.0;

  double j() const { return 0.5 * n_atoms; }
  int n_levels() const { return n_atoms + 1; }  // 2j + 1 Dicke states

  // Critical coupling of the normal/superradiant transition.
  double gamma_c() const { return 0.5 * std::sqrt(omega_a); }

  bool superradiant() const { return gamma > gamma_c(); }

  void validate() const {
    if (n_atoms < 1) throw std::invalid_argument("ModelParams: n_atoms must be >= 1");
    if (!(omega_a >= 0.0)) throw std::invalid_argument("ModelParams: omega_a must be >= 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("ModelParams: gamma must be >= 0");
  }
};

}  // namespace dicke
