#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace dicke {

// Lowest extremal eigenpairs of a symmetric operator supplied as a
// matrix-vector callback (the caller owns the representation; here it is the
// Hamiltonian stencil, but any symmetric apply works).
//
// Full two-pass reorthogonalization, deflation of converged pairs, explicit
// restart from the best unconverged Ritz vector.  Deterministic: the start
// vector comes from a fixed-seed generator unless one is supplied.

struct LanczosOptions {
  int max_iter = 600;     // Krylov steps per restart round
  int max_rounds = 12;
  double tol = 1e-10;     // residual bound |beta_m s_{m,i}| <= tol * max(1, |theta_i|)
  int check_every = 10;
  std::uint64_t seed = 0x2545f4914f6cdd1dULL;
};

struct LanczosReport {
  bool converged = false;
  int iterations = 0;  // total matvecs
  int rounds = 0;
  double max_residual = 0.0;
};

LanczosReport lanczos_lowest(const std::function<void(const double*, double*)>& apply_op,
                             std::size_t dim, int n_pairs,
                             std::vector<double>& eigenvalues,
                             std::vector<std::vector<double>>& eigenvectors,
                             const LanczosOptions& opts = {},
                             const std::vector<double>* start = nullptr);

}  // namespace dicke
