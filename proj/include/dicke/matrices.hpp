#pragma once

#include <cstddef>
#include <vector>

#include "dicke/basis.hpp"

namespace dicke {

// Dense square matrix, row-major.  Symmetric assembly writes both triangles
// with the same value, so M == M^T holds bitwise.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  explicit DenseMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

enum class ObservableKind {
  PhotonNumber,  // a+ a
  Jz,
  Q,             // (a + a+)/sqrt(2)
  P,             // see note below
  Q2,
  P2,
  Jx2,
  Jy2,
  Jz2,
  J2,
  LambdaParity,  // diagonal +-1, parity of lambda = j + m + nu
};

// C+(j, m) = sqrt(j(j+1) - m(m+1)) tabulated over k = m + j; the top entry
// cp[2j] is zero.  C-(j, m) = cp[k-1].
std::vector<double> spin_raise_factors(const ModelParams& params);

DenseMatrix hamiltonian_matrix(const Basis& basis);

// Observable matrices over the same basis.  All kinds are real symmetric
// except P: the momentum quadrature is p = i A with A = (a+ - a)/sqrt(2)
// real antisymmetric, and that generator A is what kind P returns.  For a
// real vector x the quadratic form x^T A x vanishes identically, which is
// the statement <p> = 0 used throughout.
DenseMatrix observable_matrix(ObservableKind kind, const Basis& basis);

}  // namespace dicke
