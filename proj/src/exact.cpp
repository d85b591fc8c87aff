#include "dicke/exact.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dicke/errors.hpp"
#include "dicke/kernels/ham_stencil.hpp"
#include "dicke/matrices.hpp"

namespace dicke {

namespace {

struct BlockSolution {
  std::vector<double> energies;
  std::vector<std::vector<double>> vectors;  // over the full canonical layout
  bool converged = true;
};

// dense lowest-k eigenpairs of one parity block, embedded back into the full
// layout
BlockSolution solve_block_dense(const ModelParams& params, int nu_max, Parity parity,
                                int k) {
  const Basis block = build_basis(params, nu_max, parity);
  const int n = static_cast<int>(block.size());
  const int want = std::min(k, n);
  DenseMatrix h = hamiltonian_matrix(block);

  std::vector<double> w(n);
  std::vector<double> z(static_cast<std::size_t>(n) * want);
  std::vector<lapack_int> isuppz(2 * std::max(1, want));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', n, h.a.data(), n, 0.0, 0.0, 1, want, 0.0, &found,
      w.data(), z.data(), n, isuppz.data());
  if (info != 0)
    throw NumericalError("lowest_states: dsyevr failed, info=" + std::to_string(info) +
                         ", dim=" + std::to_string(n) +
                         ", N=" + std::to_string(params.n_atoms) +
                         ", gamma=" + std::to_string(params.gamma));

  const int n_k = params.n_levels();
  BlockSolution out;
  for (int i = 0; i < found; ++i) {
    out.energies.push_back(w[i]);
    std::vector<double> full(static_cast<std::size_t>(nu_max + 1) * n_k, 0.0);
    for (int r = 0; r < n; ++r) {
      const BasisIndex& s = block.states[r];
      full[static_cast<std::size_t>(s.nu) * n_k + s.k] =
          z[static_cast<std::size_t>(i) * n + r];
    }
    out.vectors.push_back(std::move(full));
  }
  return out;
}

// iterative lowest-k eigenpairs: run the stencil on the full layout with a
// parity-projected start vector (the stencil keeps the sector exactly)
BlockSolution solve_block_iterative(const kernels::HamStencil& stencil,
                                    const ModelParams& params, int nu_max, Parity parity,
                                    int k, const LanczosOptions& lopts) {
  const int n_k = params.n_levels();
  const std::size_t dim = stencil.dim();

  std::size_t block_dim = 0;
  std::vector<double> start(dim, 0.0);
  std::mt19937_64 rng(lopts.seed ^ (parity == Parity::Even ? 0x243f6a88ULL : 0x85a308d3ULL));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int want_parity = static_cast<int>(parity);
  for (int nu = 0; nu <= nu_max; ++nu)
    for (int kk = (nu + want_parity) % 2 == 0 ? 0 : 1; kk < n_k; kk += 2) {
      start[static_cast<std::size_t>(nu) * n_k + kk] = u(rng);
      ++block_dim;
    }

  const int want = static_cast<int>(std::min<std::size_t>(k, block_dim));
  auto apply = [&stencil](const double* x, double* y) { kernels::apply(stencil, x, y); };

  BlockSolution out;
  LanczosOptions lo = lopts;
  const LanczosReport rep =
      lanczos_lowest(apply, dim, want, out.energies, out.vectors, lo, &start);
  out.converged = rep.converged;
  return out;
}

void fix_sign(std::vector<double>& vec) {
  std::size_t imax = 0;
  double amax = 0.0;
  for (std::size_t i = 0; i < vec.size(); ++i) {
    const double a = std::abs(vec[i]);
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  if (vec[imax] < 0.0)
    for (double& c : vec) c = -c;
}

std::size_t block_dimension(const ModelParams& params, int nu_max, Parity parity) {
  const int n_k = params.n_levels();
  std::size_t d = 0;
  for (int nu = 0; nu <= nu_max; ++nu) {
    const int first = (nu + static_cast<int>(parity)) % 2 == 0 ? 0 : 1;
    d += static_cast<std::size_t>((n_k - 1 - first) / 2 + (first < n_k ? 1 : 0));
  }
  return d;
}

}  // namespace

EigenResult lowest_states(const ModelParams& params, int nu_max, int k,
                          std::optional<Parity> parity_filter, const SolverOptions& opts) {
  params.validate();
  if (nu_max < 0) throw std::invalid_argument("lowest_states: nu_max must be >= 0");
  if (k < 1) throw std::invalid_argument("lowest_states: k must be >= 1");

  const Basis target = build_basis(params, nu_max, parity_filter);
  if (static_cast<std::size_t>(k) > target.size())
    throw std::invalid_argument("lowest_states: k exceeds basis size");

  const std::vector<Parity> blocks =
      parity_filter ? std::vector<Parity>{*parity_filter}
                    : std::vector<Parity>{Parity::Even, Parity::Odd};

  kernels::HamStencil stencil;  // built lazily for the iterative path
  bool have_stencil = false;

  struct Tagged {
    double energy;
    Parity parity;
    std::vector<double> vec;  // full layout
  };
  std::vector<Tagged> merged;
  bool all_converged = true;

  for (Parity p : blocks) {
    const std::size_t bdim = block_dimension(params, nu_max, p);
    if (bdim == 0) continue;
    const int want = static_cast<int>(std::min<std::size_t>(k, bdim));

    const bool dense = opts.policy == SolverPolicy::Dense ||
                       (opts.policy == SolverPolicy::Auto &&
                        bdim <= static_cast<std::size_t>(opts.dense_threshold));
    BlockSolution sol;
    if (dense) {
      sol = solve_block_dense(params, nu_max, p, want);
    } else {
      if (!have_stencil) {
        stencil = kernels::make_stencil(params, nu_max);
        have_stencil = true;
      }
      sol = solve_block_iterative(stencil, params, nu_max, p, want, opts.lanczos);
    }
    all_converged = all_converged && sol.converged;
    for (std::size_t i = 0; i < sol.energies.size(); ++i)
      merged.push_back(Tagged{sol.energies[i], p, std::move(sol.vectors[i])});
  }

  std::stable_sort(merged.begin(), merged.end(),
                   [](const Tagged& a, const Tagged& b) { return a.energy < b.energy; });
  // near-exact doublets: even (+1) first
  for (std::size_t i = 0; i + 1 < merged.size(); ++i)
    if (std::abs(merged[i + 1].energy - merged[i].energy) < 1e-12 &&
        merged[i].parity == Parity::Odd && merged[i + 1].parity == Parity::Even)
      std::swap(merged[i], merged[i + 1]);

  if (merged.size() > static_cast<std::size_t>(k)) merged.resize(k);

  const int n_k = params.n_levels();
  EigenResult res;
  res.nu_max_used = nu_max;
  res.converged = all_converged;
  for (Tagged& t : merged) {
    fix_sign(t.vec);
    res.energies.push_back(t.energy);
    if (parity_filter) {
      // compress the full layout onto the filtered basis
      std::vector<double> compact(target.size(), 0.0);
      for (std::size_t i = 0; i < target.size(); ++i) {
        const BasisIndex& s = target.states[i];
        compact[i] = t.vec[static_cast<std::size_t>(s.nu) * n_k + s.k];
      }
      res.vectors.push_back(std::move(compact));
    } else {
      res.vectors.push_back(std::move(t.vec));
    }
    res.parities.push_back(static_cast<double>(parity_sign(t.parity)));
  }
  return res;
}

double state_parity(std::span<const double> state, const Basis& basis) {
  double s = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    s += parity_sign(basis.states[i].parity()) * state[i] * state[i];
  return s;
}

ObservableSet expectation_set(std::span<const double> state, const Basis& basis) {
  if (state.size() != basis.size())
    throw std::invalid_argument("expectation_set: state/basis size mismatch");
  double norm2 = 0.0;
  for (double c : state) norm2 += c * c;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8)
    throw std::invalid_argument("expectation_set: state is not unit norm");

  const ModelParams& p = basis.params;
  const double j = p.j();
  const double n = p.n_atoms;
  const double g = p.gamma / std::sqrt(n);
  const std::vector<double> cp = spin_raise_factors(p);

  double nph = 0.0, jz = 0.0, osc_diag = 0.0, spin_diag = 0.0;
  double cross_q = 0.0, cross_spin = 0.0, energy = 0.0, coupling = 0.0;

  for (std::size_t i = 0; i < basis.size(); ++i) {
    const BasisIndex& s = basis.states[i];
    const double c = state[i];
    const double c2 = c * c;
    const double m = s.k - j;

    nph += s.nu * c2;
    jz += m * c2;
    osc_diag += (s.nu + 0.5) * c2;
    spin_diag += 0.5 * (j * (j + 1) - m * m) * c2;
    energy += (s.nu + p.omega_a * m) * c2;

    // q^2/p^2 cross term: (nu, k) -> (nu+2, k)
    const std::int32_t up2 = basis.position(s.nu + 2, s.k);
    if (up2 >= 0)
      cross_q += 0.5 * std::sqrt(static_cast<double>(s.nu + 1) * (s.nu + 2)) * c *
                 state[up2];
    // Jx^2/Jy^2 cross term: (nu, k) -> (nu, k+2)
    const std::int32_t kk2 = basis.position(s.nu, s.k + 2);
    if (kk2 >= 0) cross_spin += 0.25 * cp[s.k] * cp[s.k + 1] * c * state[kk2];

    // coupling (a+ + a)(J+ + J-), filled from the photon-raising side
    const double a = std::sqrt(static_cast<double>(s.nu + 1));
    const std::int32_t ur = basis.position(s.nu + 1, s.k + 1);
    if (ur >= 0) coupling += a * cp[s.k] * c * state[ur];
    const std::int32_t ul = basis.position(s.nu + 1, s.k - 1);
    if (ul >= 0 && s.k > 0) coupling += a * cp[s.k - 1] * c * state[ul];
  }

  ObservableSet o;
  o.energy = energy + 2.0 * g * coupling;
  o.n_photons = nph;
  o.jz = jz;
  o.n_excited = 0.5 * n + jz;
  o.q2 = osc_diag + 2.0 * cross_q;
  o.p2 = osc_diag - 2.0 * cross_q;
  o.var_q = o.q2;
  o.var_p = o.p2;
  o.jx2 = spin_diag + 2.0 * cross_spin;
  o.jy2 = spin_diag - 2.0 * cross_spin;
  o.xi_x2 = 4.0 * o.jx2 / n;
  o.xi_y2 = 4.0 * o.jy2 / n;
  o.first_moments_zero = true;
  return o;
}

int converge_cutoff(const ModelParams& params, double energy_tol, std::optional<int> start,
                    const SolverOptions& opts) {
  params.validate();
  if (!(energy_tol > 0.0))
    throw std::invalid_argument("converge_cutoff: energy_tol must be > 0");

  constexpr int kCap = 100000;
  int cutoff = start.value_or(static_cast<int>(
      std::ceil(4.0 * params.n_atoms * params.gamma * params.gamma + 30.0)));
  if (cutoff < 1) cutoff = 1;

  auto ground = [&](int nu_max) {
    const EigenResult r = lowest_states(params, nu_max, 1, std::nullopt, opts);
    if (!r.converged)
      throw NumericalError("converge_cutoff: eigensolver did not converge at nu_max=" +
                           std::to_string(nu_max));
    // probability on the top two Fock levels
    const int n_k = params.n_levels();
    const std::vector<double>& v = r.vectors[0];
    double tail = 0.0;
    for (int nu = std::max(0, nu_max - 1); nu <= nu_max; ++nu)
      for (int k = 0; k < n_k; ++k) {
        const double c = v[static_cast<std::size_t>(nu) * n_k + k];
        tail += c * c;
      }
    return std::pair<double, double>(r.energies[0], tail);
  };

  auto [e_prev, tail_prev] = ground(cutoff);
  while (cutoff <= kCap) {
    const int next = static_cast<int>(std::ceil(1.5 * cutoff));
    const auto [e_next, tail_next] = ground(next);
    if (std::abs(e_next - e_prev) < energy_tol && tail_prev < 1e-10) return cutoff;
    cutoff = next;
    e_prev = e_next;
    tail_prev = tail_next;
  }
  throw NumericalError("converge_cutoff: cutoff cap 1e5 exceeded for N=" +
                       std::to_string(params.n_atoms) +
                       ", gamma=" + std::to_string(params.gamma));
}

double energy_gap(const ModelParams& params, int nu_max, const SolverOptions& opts) {
  const EigenResult r = lowest_states(params, nu_max, 2, std::nullopt, opts);
  if (r.energies.size() < 2)
    throw NumericalError("energy_gap: fewer than two states available");
  return r.energies[1] - r.energies[0];
}

}  // namespace dicke
