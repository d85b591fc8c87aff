#include "dicke/lanczos.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dicke/errors.hpp"

namespace dicke {

namespace {

// w -= V(:, 0..cols) (V^T w), two classical Gram-Schmidt passes
void reorthogonalize(const double* v, std::size_t dim, int cols, double* w,
                     std::vector<double>& h) {
  if (cols == 0) return;
  h.resize(cols);
  for (int pass = 0; pass < 2; ++pass) {
    cblas_dgemv(CblasColMajor, CblasTrans, static_cast<int>(dim), cols, 1.0, v,
                static_cast<int>(dim), w, 1, 0.0, h.data(), 1);
    cblas_dgemv(CblasColMajor, CblasNoTrans, static_cast<int>(dim), cols, -1.0, v,
                static_cast<int>(dim), h.data(), 1, 1.0, w, 1);
  }
}

// lowest n eigenpairs of the tridiagonal (alpha, beta)
void tridiag_lowest(const std::vector<double>& alpha, const std::vector<double>& beta,
                    int n_pairs, std::vector<double>& theta, std::vector<double>& s) {
  const int m = static_cast<int>(alpha.size());
  const int want = std::min(n_pairs, m);
  std::vector<double> d = alpha;
  std::vector<double> e(std::max(1, m - 1), 0.0);
  std::copy(beta.begin(), beta.begin() + std::max(0, m - 1), e.begin());
  theta.assign(want, 0.0);
  s.assign(static_cast<std::size_t>(m) * want, 0.0);
  std::vector<lapack_int> isuppz(2 * std::max(1, want));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'V', 'I', m, d.data(), e.data(), 0.0, 0.0, 1, want, 0.0, &found,
      theta.data(), s.data(), m, isuppz.data());
  if (info != 0)
    throw NumericalError("lanczos: dstevr failed with info=" + std::to_string(info));
  theta.resize(found);
}

void fill_random(std::mt19937_64& rng, double* v, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < dim; ++i) v[i] = u(rng);
}

}  // namespace

LanczosReport lanczos_lowest(const std::function<void(const double*, double*)>& apply_op,
                             std::size_t dim, int n_pairs,
                             std::vector<double>& eigenvalues,
                             std::vector<std::vector<double>>& eigenvectors,
                             const LanczosOptions& opts,
                             const std::vector<double>* start) {
  if (n_pairs < 1) throw std::invalid_argument("lanczos_lowest: n_pairs must be >= 1");
  if (static_cast<std::size_t>(n_pairs) > dim)
    throw std::invalid_argument("lanczos_lowest: n_pairs exceeds dimension");

  eigenvalues.clear();
  eigenvectors.clear();

  std::mt19937_64 rng(opts.seed);
  const int m_max = static_cast<int>(std::min<std::size_t>(opts.max_iter, dim));

  // locked (converged) pairs, kept orthonormal
  std::vector<std::vector<double>> locked;
  std::vector<double> locked_vals;

  // Krylov basis, column-major dim x (m_max + 1)
  std::vector<double> v(static_cast<std::size_t>(dim) * (m_max + 1));
  std::vector<double> w(dim), h;
  std::vector<double> alpha, beta;
  std::vector<double> restart_vec;

  LanczosReport report;

  auto orth_against_locked = [&](double* vec) {
    for (const auto& l : locked) {
      for (int pass = 0; pass < 2; ++pass) {
        const double c = cblas_ddot(static_cast<int>(dim), l.data(), 1, vec, 1);
        cblas_daxpy(static_cast<int>(dim), -c, l.data(), 1, vec, 1);
      }
    }
  };

  for (int round = 0; round < opts.max_rounds; ++round) {
    report.rounds = round + 1;
    const int still_needed = n_pairs - static_cast<int>(locked.size());
    if (still_needed <= 0) break;

    // start vector: caller's (first round), restart vector, or random
    double* v0 = v.data();
    if (round == 0 && start != nullptr && start->size() == dim)
      std::copy(start->begin(), start->end(), v0);
    else if (!restart_vec.empty())
      std::copy(restart_vec.begin(), restart_vec.end(), v0);
    else
      fill_random(rng, v0, dim);
    orth_against_locked(v0);
    double nrm = cblas_dnrm2(static_cast<int>(dim), v0, 1);
    if (nrm < 1e-14) {
      fill_random(rng, v0, dim);
      orth_against_locked(v0);
      nrm = cblas_dnrm2(static_cast<int>(dim), v0, 1);
    }
    cblas_dscal(static_cast<int>(dim), 1.0 / nrm, v0, 1);

    alpha.clear();
    beta.clear();
    std::vector<double> theta, s;
    bool round_converged = false;
    int m = 0;

    const int m_round =
        std::min<int>(m_max, static_cast<int>(dim - locked.size()));
    for (int it = 0; it < m_round; ++it) {
      const double* vj = v.data() + static_cast<std::size_t>(it) * dim;
      double* vn = v.data() + static_cast<std::size_t>(it + 1) * dim;

      apply_op(vj, w.data());
      ++report.iterations;
      if (it > 0)
        cblas_daxpy(static_cast<int>(dim), -beta[it - 1],
                    v.data() + static_cast<std::size_t>(it - 1) * dim, 1, w.data(), 1);
      const double a = cblas_ddot(static_cast<int>(dim), vj, 1, w.data(), 1);
      alpha.push_back(a);
      cblas_daxpy(static_cast<int>(dim), -a, vj, 1, w.data(), 1);

      reorthogonalize(v.data(), dim, it + 1, w.data(), h);
      orth_against_locked(w.data());

      double b = cblas_dnrm2(static_cast<int>(dim), w.data(), 1);
      m = it + 1;
      if (b < 1e-12 * std::max(1.0, std::abs(a))) {
        // invariant subspace: the tridiagonal is exact, every Ritz pair of it
        // has zero residual
        beta.push_back(0.0);
        round_converged = true;
        break;
      }
      beta.push_back(b);
      std::copy(w.begin(), w.end(), vn);
      cblas_dscal(static_cast<int>(dim), 1.0 / b, vn, 1);

      if ((it + 1) % opts.check_every == 0 || it + 1 == m_round) {
        tridiag_lowest(alpha, beta, still_needed, theta, s);
        bool all_ok = true;
        double worst = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
          const double res = std::abs(beta[m - 1] * s[static_cast<std::size_t>(i) * m + m - 1]);
          worst = std::max(worst, res);
          if (res > opts.tol * std::max(1.0, std::abs(theta[i]))) all_ok = false;
        }
        report.max_residual = worst;
        if (all_ok && static_cast<int>(theta.size()) >= std::min<int>(still_needed, m)) {
          round_converged = true;
          break;
        }
      }
    }

    if (alpha.empty()) break;
    tridiag_lowest(alpha, beta, still_needed, theta, s);

    // Ritz vectors for this round, lowest first
    std::vector<std::vector<double>> ritz;
    std::vector<double> ritz_vals;
    std::vector<bool> ritz_ok;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      std::vector<double> y(dim, 0.0);
      cblas_dgemv(CblasColMajor, CblasNoTrans, static_cast<int>(dim), m, 1.0, v.data(),
                  static_cast<int>(dim), s.data() + i * m, 1, 0.0, y.data(), 1);
      orth_against_locked(y.data());
      const double yn = cblas_dnrm2(static_cast<int>(dim), y.data(), 1);
      if (yn < 1e-8) continue;
      cblas_dscal(static_cast<int>(dim), 1.0 / yn, y.data(), 1);
      const double res =
          (beta.empty() || beta[m - 1] == 0.0)
              ? 0.0
              : std::abs(beta[m - 1] * s[i * m + m - 1]);
      ritz.push_back(std::move(y));
      ritz_vals.push_back(theta[i]);
      ritz_ok.push_back(res <= opts.tol * std::max(1.0, std::abs(theta[i])) ||
                        round_converged);
    }

    // lock converged pairs in ascending order; stop locking at the first
    // unconverged one so the locked set is always the lowest of the spectrum
    std::size_t mi = 0;
    for (; mi < ritz.size() && static_cast<int>(locked.size()) < n_pairs; ++mi) {
      if (!ritz_ok[mi]) break;
      locked.push_back(std::move(ritz[mi]));
      locked_vals.push_back(ritz_vals[mi]);
    }
    if (static_cast<int>(locked.size()) >= n_pairs) {
      report.converged = true;
      break;
    }

    const bool last_round = round + 1 == opts.max_rounds;
    if (last_round) {
      // best effort: pad with the unconverged Ritz pairs
      for (std::size_t i = mi;
           i < ritz.size() && static_cast<int>(locked.size()) < n_pairs; ++i) {
        locked.push_back(std::move(ritz[i]));
        locked_vals.push_back(ritz_vals[i]);
      }
    } else if (mi < ritz.size()) {
      restart_vec = std::move(ritz[mi]);  // refine the best unconverged pair
    } else {
      restart_vec.clear();
    }
  }

  report.converged = static_cast<int>(locked_vals.size()) >= n_pairs &&
                     report.converged;

  eigenvalues = locked_vals;
  eigenvectors = std::move(locked);
  return report;
}

}  // namespace dicke
