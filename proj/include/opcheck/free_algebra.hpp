#pragma once

#include <vector>

#include "opcheck/operad.hpp"
#include "opcheck/operad_builders.hpp"

namespace opcheck {

// The truncated free P-algebra on X = K^x: arity part n is the space of
// coinvariants (P(n) (x) X^(x)n)_{S_n} for the diagonal action, with the
// unit map X -> P(1) (x) X induced by the operad unit.

template <Field F>
struct FreeAlgebraGrading {
  std::vector<int> arity_dims;           // dim of each coinvariant space
  long total_dim = 0;
  std::vector<Quotient<F>> quotients;    // P(n) (x) X^(x)n ->> coinvariants
  LinearMap<F> unit_map;                 // X -> arity-1 part
  bool unit_injective = false;
};

inline constexpr long kFreeAlgebraEntryBudget = 1L << 22;

template <Field F>
FreeAlgebraGrading<F> free_algebra(const TruncatedOperad<F>& p, int x) {
  if (x < 0) throw std::invalid_argument("free_algebra: negative generator count");
  const F& k = p.field;
  FreeAlgebraGrading<F> out{{}, 0, {}, LinearMap<F>(k, 0, 0), false};
  for (int n = 0; n <= p.max_arity; ++n) {
    long space = static_cast<long>(p.dims[n]) * detail::ipow(x, n);
    if (space > kFreeAlgebraEntryBudget)
      throw budget_error("free_algebra: arity " + std::to_string(n) +
                         " space dimension exceeds budget");
    std::vector<LinearMap<F>> gens;
    for (int t = 0; t + 1 < n; ++t)
      gens.push_back(tensor(
          p.action[n][t],
          perm_on_tensor_power(k, Permutation::adjacent(n, t), x)));
    out.quotients.push_back(coinvariants(k, static_cast<int>(space), gens));
    out.arity_dims.push_back(out.quotients.back().dim);
    out.total_dim += out.quotients.back().dim;
  }
  if (p.max_arity >= 1) {
    // X = K (x) X -> P(1) (x) X, then onto the coinvariants (S_1 is
    // trivial, but the quotient map keeps the bookkeeping uniform).
    out.unit_map = compose(
        out.quotients[1].map,
        tensor(p.unit_map(), LinearMap<F>::identity(k, x)));
    out.unit_injective = is_injective(out.unit_map);
  }
  return out;
}

}  // namespace opcheck
