#include "dicke/basis.hpp"

#include <stdexcept>

namespace dicke {

Basis build_basis(const ModelParams& params, int nu_max,
                  std::optional<Parity> parity_filter) {
  params.validate();
  if (nu_max < 0) throw std::invalid_argument("build_basis: nu_max must be >= 0");

  Basis basis;
  basis.params = params;
  basis.nu_max = nu_max;
  basis.parity_filter = parity_filter;

  const int n_k = params.n_levels();
  basis.slot.assign(static_cast<std::size_t>(nu_max + 1) * n_k, -1);
  basis.states.reserve(static_cast<std::size_t>(nu_max + 1) * n_k);

  for (int nu = 0; nu <= nu_max; ++nu) {
    for (int k = 0; k < n_k; ++k) {
      const BasisIndex s{nu, k};
      if (parity_filter && s.parity() != *parity_filter) continue;
      basis.slot[static_cast<std::size_t>(nu) * n_k + k] =
          static_cast<std::int32_t>(basis.states.size());
      basis.states.push_back(s);
    }
  }
  return basis;
}

}  // namespace dicke
