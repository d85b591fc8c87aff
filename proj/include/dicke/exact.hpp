#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dicke/basis.hpp"
#include "dicke/lanczos.hpp"
#include "dicke/observables.hpp"
#include "dicke/params.hpp"

namespace dicke {

enum class SolverPolicy {
  Auto,       // dense per-block below dense_threshold, iterative above
  Dense,
  Iterative,
};

struct SolverOptions {
  SolverPolicy policy = SolverPolicy::Auto;
  int dense_threshold = 5000;  // per parity block
  LanczosOptions lanczos;
};

struct EigenResult {
  std::vector<double> energies;               // ascending
  std::vector<std::vector<double>> vectors;   // unit norm over the basis
  std::vector<double> parities;               // <Lambda parity>, +-1
  int nu_max_used = 0;
  bool converged = true;
};

// k lowest eigenpairs of the truncated Hamiltonian.  Without a parity filter
// the two parity blocks are solved separately and merged (the coupling is
// block diagonal in the lambda parity), and the vectors live on the full
// basis; with a filter they live on the filtered basis.  Eigenvector sign is
// fixed by making the largest-magnitude component positive.  Near-exact
// doublets (splitting < 1e-12) are ordered even first.
EigenResult lowest_states(const ModelParams& params, int nu_max, int k,
                          std::optional<Parity> parity_filter = std::nullopt,
                          const SolverOptions& opts = {});

// Contract a unit-norm state with every observable.  First moments of q, p,
// Jx, Jy vanish by the parity selection rule and are taken as exactly zero.
ObservableSet expectation_set(std::span<const double> state, const Basis& basis);

// <Lambda parity> of a state over the given basis.
double state_parity(std::span<const double> state, const Basis& basis);

// Smallest tested photon cutoff (grid: start, then x1.5 rounded up) whose
// ground energy is converged to energy_tol against the next grid point and
// whose top two Fock levels carry < 1e-10 probability.  Default start is
// ceil(4 N gamma^2 + 30); the search is capped at nu_max = 1e5.
int converge_cutoff(const ModelParams& params, double energy_tol,
                    std::optional<int> start = std::nullopt,
                    const SolverOptions& opts = {});

// E1 - E0 of the full (unfiltered) spectrum.
double energy_gap(const ModelParams& params, int nu_max, const SolverOptions& opts = {});

}  // namespace dicke
