#include "dicke/matrices.hpp"

#include <cmath>
#include <stdexcept>

namespace dicke {

namespace {

// Symmetric fill: both triangles get the identical value.
inline void add_sym(DenseMatrix& m, std::int32_t i, std::int32_t j, double v) {
  if (i < 0 || j < 0) return;
  m.at(i, j) += v;
  if (i != j) m.at(j, i) += v;
}

}  // namespace

std::vector<double> spin_raise_factors(const ModelParams& params) {
  const int n_k = params.n_levels();
  const double j = params.j();
  std::vector<double> cp(n_k, 0.0);
  for (int k = 0; k + 1 < n_k; ++k) {
    const double m = k - j;
    cp[k] = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  return cp;
}

DenseMatrix hamiltonian_matrix(const Basis& basis) {
  const ModelParams& p = basis.params;
  const double j = p.j();
  const double g = p.gamma / std::sqrt(static_cast<double>(p.n_atoms));
  const std::vector<double> cp = spin_raise_factors(p);

  DenseMatrix h(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const BasisIndex& s = basis.states[i];
    h.at(i, i) = s.nu + p.omega_a * (s.k - j);

    // (gamma/sqrt(N)) (a+ + a)(J+ + J-); fill each pair once from the
    // raising-photon side.
    const double a = g * std::sqrt(static_cast<double>(s.nu + 1));
    const std::int32_t up_raise = basis.position(s.nu + 1, s.k + 1);
    if (up_raise >= 0) add_sym(h, static_cast<std::int32_t>(i), up_raise, a * cp[s.k]);
    const std::int32_t up_lower = basis.position(s.nu + 1, s.k - 1);
    if (up_lower >= 0 && s.k > 0)
      add_sym(h, static_cast<std::int32_t>(i), up_lower, a * cp[s.k - 1]);
  }
  return h;
}

DenseMatrix observable_matrix(ObservableKind kind, const Basis& basis) {
  const ModelParams& p = basis.params;
  const double j = p.j();
  const std::vector<double> cp = spin_raise_factors(p);

  DenseMatrix m(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const BasisIndex& s = basis.states[i];
    const double mz = s.k - j;
    const std::int32_t si = static_cast<std::int32_t>(i);

    switch (kind) {
      case ObservableKind::PhotonNumber:
        m.at(i, i) = s.nu;
        break;
      case ObservableKind::Jz:
        m.at(i, i) = mz;
        break;
      case ObservableKind::Jz2:
        m.at(i, i) = mz * mz;
        break;
      case ObservableKind::J2:
        m.at(i, i) = j * (j + 1);
        break;
      case ObservableKind::LambdaParity:
        m.at(i, i) = parity_sign(s.parity());
        break;
      case ObservableKind::Q: {
        // (a + a+)/sqrt(2)
        const std::int32_t up = basis.position(s.nu + 1, s.k);
        if (up >= 0) add_sym(m, si, up, std::sqrt(0.5 * (s.nu + 1)));
        break;
      }
      case ObservableKind::P: {
        // real antisymmetric generator A with p = i A
        const std::int32_t up = basis.position(s.nu + 1, s.k);
        if (up >= 0) {
          const double v = std::sqrt(0.5 * (s.nu + 1));
          m.at(up, i) += v;   // <nu+1| a+ |nu> side
          m.at(i, up) -= v;
        }
        break;
      }
      case ObservableKind::Q2:
      case ObservableKind::P2: {
        // (a +- a+)^2 / 2: shared diagonal nu + 1/2, cross term on nu+2 with
        // opposite signs.
        m.at(i, i) = s.nu + 0.5;
        const std::int32_t up2 = basis.position(s.nu + 2, s.k);
        if (up2 >= 0) {
          const double v = 0.5 * std::sqrt(static_cast<double>(s.nu + 1) * (s.nu + 2));
          add_sym(m, si, up2, kind == ObservableKind::Q2 ? v : -v);
        }
        break;
      }
      case ObservableKind::Jx2:
      case ObservableKind::Jy2: {
        // (J+ J- + J- J+)/4 diagonal, (J+^2 +- ...)/4 cross on m+2.
        m.at(i, i) = 0.5 * (j * (j + 1) - mz * mz);
        const std::int32_t up2 = basis.position(s.nu, s.k + 2);
        if (up2 >= 0 && s.k + 1 < p.n_levels()) {
          const double v = 0.25 * cp[s.k] * cp[s.k + 1];
          add_sym(m, si, up2, kind == ObservableKind::Jx2 ? v : -v);
        }
        break;
      }
    }
  }
  return m;
}

}  // namespace dicke
