#pragma once

namespace dicke {

// Uniform record of ground-state observables shared by the three methods
// (mean field, parity-projected states, exact diagonalization).
// energy is the total <H>, not per atom; n_excited = <N/2 + Jz>;
// xi_i2 = 4 (Delta J_i)^2 / N.
struct ObservableSet {
  double energy = 0.0;
  double n_photons = 0.0;
  double n_excited = 0.0;
  double jz = 0.0;
  double q2 = 0.0;
  double p2 = 0.0;
  double var_q = 0.0;
  double var_p = 0.0;
  double jx2 = 0.0;
  double jy2 = 0.0;
  double xi_x2 = 0.0;
  double xi_y2 = 0.0;
  // True when <q> = <p> = <Jx> = <Jy> = 0 holds for the source state (any
  // definite-parity state); the variances above then equal the raw second
  // moments.
  bool first_moments_zero = true;
};

}  // namespace dicke
