#include <doctest.h>

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dicke/basis.hpp"
#include "dicke/exact.hpp"
#include "dicke/matrices.hpp"
#include "dicke/mean_field.hpp"
#include "dicke/projected.hpp"

using namespace dicke;

namespace {

// full spectrum by brute force, used as the small-dimension oracle
std::vector<double> dense_spectrum(const Basis& basis) {
  DenseMatrix h = hamiltonian_matrix(basis);
  const int n = static_cast<int>(h.n);
  std::vector<double> w(n);
  const int info =
      LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'L', n, h.a.data(), n, w.data());
  REQUIRE(info == 0);
  return w;
}

double contract(const DenseMatrix& m, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) s += x[i] * m.at(i, j) * x[j];
  return s;
}

}  // namespace

TEST_CASE("decoupled limit gamma = 0") {
  const ModelParams p{6, 1.0, 0.0};
  const EigenResult r = lowest_states(p, 20, 1);
  CHECK(r.energies[0] == doctest::Approx(-3.0).epsilon(1e-12));  // -N/2
  // ground vector is |nu=0, m=-j>, the first canonical slot
  CHECK(std::abs(r.vectors[0][0]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.parities[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vacuum expectation set") {
  const ModelParams p{8, 1.0, 0.3};
  const Basis basis = build_basis(p, 10);
  std::vector<double> vac(basis.size(), 0.0);
  vac[0] = 1.0;  // |0, -j>
  const ObservableSet o = expectation_set(vac, basis);
  CHECK(o.n_photons == 0.0);
  CHECK(o.n_excited == doctest::Approx(0.0));
  CHECK(o.var_q == doctest::Approx(0.5));
  CHECK(o.var_p == doctest::Approx(0.5));
  CHECK(o.jx2 == doctest::Approx(0.5 * p.j()));
  CHECK(o.jy2 == doctest::Approx(0.5 * p.j()));
  CHECK(o.xi_x2 == doctest::Approx(1.0));
  CHECK(o.xi_y2 == doctest::Approx(1.0));
  CHECK(o.energy == doctest::Approx(-0.5 * p.n_atoms));
}

TEST_CASE("expectation_set rejects non-unit vectors and size mismatch") {
  const ModelParams p{2, 1.0, 0.1};
  const Basis basis = build_basis(p, 3);
  std::vector<double> v(basis.size(), 0.0);
  v[0] = 0.9;
  CHECK_THROWS_AS(expectation_set(v, basis), std::invalid_argument);
  std::vector<double> wrong(basis.size() + 1, 0.0);
  CHECK_THROWS_AS(expectation_set(wrong, basis), std::invalid_argument);
}

TEST_CASE("counter-rotating terms push the N=1 ground state below -1/2") {
  const ModelParams weak{1, 1.0, 0.1};
  const EigenResult r = lowest_states(weak, 40, 1);
  CHECK(r.energies[0] < -0.5);

  // energy decreases monotonically with gamma
  double prev = 0.0;
  for (double gamma : {0.0, 0.1, 0.2, 0.4, 0.8}) {
    const EigenResult s = lowest_states(ModelParams{1, 1.0, gamma}, 60, 1);
    CHECK(s.energies[0] <= prev + 1e-12);
    prev = s.energies[0];
  }
}

TEST_CASE("parity-resolved doublet deep in the superradiant phase") {
  const ModelParams p{2, 1.0, 1.0};
  const EigenResult r = lowest_states(p, 80, 2);
  REQUIRE(r.energies.size() == 2);
  CHECK(r.parities[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.parities[1] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(r.energies[1] - r.energies[0] >= 0.0);
  CHECK(r.energies[1] - r.energies[0] < 0.05);
}

TEST_CASE("block merge reproduces the full spectrum") {
  const ModelParams p{3, 0.8, 0.9};
  const int nu_max = 12;
  const Basis full = build_basis(p, nu_max);
  std::vector<double> reference = dense_spectrum(full);

  std::vector<double> merged;
  for (Parity parity : {Parity::Even, Parity::Odd}) {
    const Basis block = build_basis(p, nu_max, parity);
    const std::vector<double> w = dense_spectrum(block);
    merged.insert(merged.end(), w.begin(), w.end());
  }
  std::sort(merged.begin(), merged.end());
  REQUIRE(merged.size() == reference.size());
  for (std::size_t i = 0; i < merged.size(); ++i)
    CHECK(merged[i] == doctest::Approx(reference[i]).epsilon(1e-10));
}

TEST_CASE("dense and iterative paths agree") {
  const ModelParams p{6, 1.0, 0.9};
  const int nu_max = 40;
  SolverOptions dense;
  dense.policy = SolverPolicy::Dense;
  SolverOptions iter;
  iter.policy = SolverPolicy::Iterative;

  const EigenResult rd = lowest_states(p, nu_max, 3, std::nullopt, dense);
  const EigenResult ri = lowest_states(p, nu_max, 3, std::nullopt, iter);
  REQUIRE(ri.converged);
  for (int i = 0; i < 3; ++i) {
    CHECK(ri.energies[i] == doctest::Approx(rd.energies[i]).epsilon(1e-9));
    CHECK(ri.parities[i] == doctest::Approx(rd.parities[i]).epsilon(1e-9));
    // vectors agree up to the fixed sign convention
    double overlap = 0.0;
    for (std::size_t c = 0; c < rd.vectors[i].size(); ++c)
      overlap += rd.vectors[i][c] * ri.vectors[i][c];
    CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("eigenvectors conserve J^2 and are orthonormal") {
  const ModelParams p{4, 1.0, 0.8};
  const int nu_max = 30;
  const EigenResult r = lowest_states(p, nu_max, 4);
  const Basis basis = build_basis(p, nu_max);
  const DenseMatrix j2 = observable_matrix(ObservableKind::J2, basis);
  const double expected = p.j() * (p.j() + 1.0);
  for (const auto& v : r.vectors)
    CHECK(contract(j2, v) == doctest::Approx(expected).epsilon(1e-10));
  for (std::size_t a = 0; a < r.vectors.size(); ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      double dot = 0.0;
      for (std::size_t c = 0; c < r.vectors[a].size(); ++c)
        dot += r.vectors[a][c] * r.vectors[b][c];
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
    }
}

TEST_CASE("parity filter returns vectors over the filtered basis") {
  const ModelParams p{3, 1.0, 0.7};
  const int nu_max = 25;
  const EigenResult even = lowest_states(p, nu_max, 2, Parity::Even);
  const Basis block = build_basis(p, nu_max, Parity::Even);
  REQUIRE(even.vectors[0].size() == block.size());
  CHECK(state_parity(even.vectors[0], block) == doctest::Approx(1.0));

  // merged full solve contains the block energies
  const EigenResult full = lowest_states(p, nu_max, 6);
  for (double e : even.energies) {
    const bool found = std::any_of(full.energies.begin(), full.energies.end(),
                                   [&](double x) { return std::abs(x - e) < 1e-9; });
    CHECK(found);
  }
}

TEST_CASE("converge_cutoff") {
  SUBCASE("gamma = 0 accepts the start immediately") {
    const ModelParams p{5, 1.0, 0.0};
    CHECK(converge_cutoff(p, 1e-8, 17) == 17);
  }

  SUBCASE("finite-N photon occupation in the normal phase is small but positive") {
    const ModelParams p{10, 1.0, 0.25};
    const int cut = converge_cutoff(p, 1e-8);
    const EigenResult r = lowest_states(p, cut, 1);
    const Basis basis = build_basis(p, cut);
    const ObservableSet o = expectation_set(r.vectors[0], basis);
    CHECK(o.n_photons > 0.0);
    CHECK(o.n_photons < 0.1);
  }

  SUBCASE("converged N=50 photon number lands on the mean-field value") {
    const ModelParams p{50, 1.0, 1.0};
    SolverOptions opts;
    opts.policy = SolverPolicy::Iterative;
    const int cut = converge_cutoff(p, 1e-8, std::nullopt, opts);
    CHECK(cut > 46.875);  // comfortably above the mean photon number
    const EigenResult r = lowest_states(p, cut, 1, std::nullopt, opts);
    const Basis basis = build_basis(p, cut);
    const ObservableSet o = expectation_set(r.vectors[0], basis);
    CHECK(o.n_photons == doctest::Approx(46.875).epsilon(0.05));
  }

  SUBCASE("rejects a bad tolerance") {
    CHECK_THROWS_AS(converge_cutoff(ModelParams{2, 1.0, 0.5}, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("energy gap") {
  SUBCASE("decoupled gap is min(omega_a, 1)") {
    CHECK(energy_gap(ModelParams{4, 0.5, 0.0}, 10) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(energy_gap(ModelParams{4, 3.0, 0.0}, 10) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("ground parity +1, first excited -1 in the superradiant phase") {
    const ModelParams p{40, 1.0, 0.75};
    SolverOptions opts;
    opts.policy = SolverPolicy::Iterative;
    const int cut = converge_cutoff(p, 1e-8, std::nullopt, opts);
    const EigenResult r = lowest_states(p, cut, 2, std::nullopt, opts);
    CHECK(r.parities[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.parities[1] == doctest::Approx(-1.0).epsilon(1e-10));
  }
}

TEST_CASE("numerically degenerate doublet is ordered even first") {
  // F ~ 1e-23 here, far below the 1e-12 tie threshold
  const ModelParams p{8, 1.0, 1.5};
  SolverOptions opts;
  opts.policy = SolverPolicy::Iterative;
  const int cut = converge_cutoff(p, 1e-8, std::nullopt, opts);
  const EigenResult r = lowest_states(p, cut, 2, std::nullopt, opts);
  CHECK(std::abs(r.energies[1] - r.energies[0]) < 1e-10);
  CHECK(r.parities[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.parities[1] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("hellmann-feynman cross-check") {
  const ModelParams p{4, 1.0, 0.7};
  SolverOptions opts;
  const int cut = converge_cutoff(p, 1e-10);

  auto ground_energy = [&](double gamma) {
    return lowest_states(ModelParams{4, 1.0, gamma}, cut, 1, std::nullopt, opts)
        .energies[0];
  };
  const double h = 1e-4;
  const double fd = (ground_energy(p.gamma + h) - ground_energy(p.gamma - h)) / (2 * h);

  const EigenResult r = lowest_states(p, cut, 1, std::nullopt, opts);
  const Basis basis = build_basis(p, cut);
  const ObservableSet o = expectation_set(r.vectors[0], basis);
  // <(a+ + a)(J+ + J-)>/sqrt(N) = (<H> - <N_ph> - omega_a <Jz>)/gamma
  const double coupling = (o.energy - o.n_photons - p.omega_a * o.jz) / p.gamma;
  CHECK(fd == doctest::Approx(coupling).epsilon(1e-4));
}

TEST_CASE("variational hierarchy on a few superradiant points") {
  for (const auto& [n, omega_a, ratio] :
       {std::tuple{4, 1.0, 1.3}, std::tuple{10, 0.5, 1.8}, std::tuple{6, 2.0, 1.1}}) {
    const ModelParams p{n, omega_a, ratio * 0.5 * std::sqrt(omega_a)};
    const int cut = converge_cutoff(p, 1e-9);
    const double e_exact = lowest_states(p, cut, 1).energies[0];
    const double e_even = projected_observables(p, Parity::Even).energy;
    const double e_odd = projected_observables(p, Parity::Odd).energy;
    const double e_mf = mean_field_observables(p).energy;
    CHECK(e_exact <= e_even + 1e-9);
    CHECK(e_even <= e_odd + 1e-9);
    CHECK(e_exact <= e_mf + 1e-9);
  }
}

TEST_CASE("lowest_states argument validation") {
  const ModelParams p{2, 1.0, 0.5};
  CHECK_THROWS_AS(lowest_states(p, -1, 1), std::invalid_argument);
  CHECK_THROWS_AS(lowest_states(p, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(lowest_states(p, 1, 1000), std::invalid_argument);
}
