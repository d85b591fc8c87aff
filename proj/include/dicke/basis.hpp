#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dicke/params.hpp"

namespace dicke {

// One product ket |nu> (x) |j, m>.  The half-integer m is stored as the
// ladder index k = m + j in {0, ..., 2j} so indexing stays exact for odd N.
struct BasisIndex {
  int nu = 0;  // photon number
  int k = 0;   // number of excited atoms, m = k - j

  int lambda() const { return nu + k; }
  Parity parity() const { return parity_of(lambda()); }
};

// Truncated product basis in canonical order: ascending nu, then ascending m.
// Optionally restricted to one lambda-parity sector.
struct Basis {
  ModelParams params;
  int nu_max = 0;
  std::optional<Parity> parity_filter;
  std::vector<BasisIndex> states;

  // position(nu, k) in `states`, or -1 when (nu, k) is outside the basis.
  std::vector<std::int32_t> slot;

  std::size_t size() const { return states.size(); }
  int n_levels() const { return params.n_levels(); }

  double m_of(const BasisIndex& s) const { return s.k - params.j(); }

  std::int32_t position(int nu, int k) const {
    if (nu < 0 || nu > nu_max || k < 0 || k >= n_levels()) return -1;
    return slot[static_cast<std::size_t>(nu) * n_levels() + k];
  }
};

Basis build_basis(const ModelParams& params, int nu_max,
                  std::optional<Parity> parity_filter = std::nullopt);

}  // namespace dicke
