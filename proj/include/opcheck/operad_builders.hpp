#pragma once

#include <string>
#include <vector>

#include "opcheck/algebra.hpp"
#include "opcheck/multi_index.hpp"
#include "opcheck/operad.hpp"

namespace opcheck {

// Constructions of the standard operads, truncated at a chosen arity.
// Dimension guard for the (co)endomorphism operads; the largest space is
// Hom(V, V^(x)N) of dimension d^(N+1).
inline constexpr long kHomOperadDimBudget = 4096;

namespace detail {

/// Allocate every composition required by the truncation as a zero map of
/// the correct shape; builders then fill in the entries.
template <Field F>
void allocate_pcomps(TruncatedOperad<F>& p) {
  for (int m = 1; m <= p.max_arity; ++m)
    for (int n = 0; n <= p.max_arity && m + n - 1 <= p.max_arity; ++n)
      for (int i = 0; i < m; ++i)
        p.pcomp.emplace(PcompKey{m, n, i},
                        LinearMap<F>(p.field, p.dims[m + n - 1],
                                     p.dims[m] * p.dims[n]));
}

}  // namespace detail

/// The operad with P(1) = K and every other arity zero.
template <Field F>
TruncatedOperad<F> build_unit_operad(const F& field, int max_arity = 1) {
  if (max_arity < 1)
    throw std::invalid_argument("build_unit_operad: max_arity must be >= 1");
  TruncatedOperad<F> p(field);
  p.max_arity = max_arity;
  p.dims.assign(max_arity + 1, 0);
  p.dims[1] = 1;
  p.unit = {field.one()};
  p.action.resize(max_arity + 1);
  for (int n = 2; n <= max_arity; ++n)
    p.action[n].assign(n - 1, LinearMap<F>(field, 0, 0));
  detail::allocate_pcomps(p);
  p.pcomp.at({1, 1, 0}).at(0, 0) = field.one();
  return p;
}

/// The operad of a unital associative algebra: P(1) = A, other arities 0.
template <Field F>
TruncatedOperad<F> build_algebra_operad(const AlgebraData<F>& a,
                                        int max_arity = 1) {
  if (max_arity < 1)
    throw std::invalid_argument("build_algebra_operad: max_arity must be >= 1");
  TruncatedOperad<F> p(a.field);
  p.max_arity = max_arity;
  p.dims.assign(max_arity + 1, 0);
  p.dims[1] = a.dim;
  p.unit = a.unit;
  p.action.resize(max_arity + 1);
  for (int n = 2; n <= max_arity; ++n)
    p.action[n].assign(n - 1, LinearMap<F>(a.field, 0, 0));
  detail::allocate_pcomps(p);
  p.pcomp.at({1, 1, 0}) = a.mult;
  return p;
}

/// Arity-{0,1} operad of an algebra A acting on a space W: P(0) = W,
/// P(1) = A, composition (1,1,1) the multiplication and (1,0,1) the
/// module action A (x) W -> W.
template <Field F>
TruncatedOperad<F> build_module_operad(const AlgebraData<F>& a, int w,
                                       const LinearMap<F>& act) {
  if (act.cod() != w || act.dom() != a.dim * w)
    throw std::invalid_argument("build_module_operad: action must map A (x) W -> W");
  TruncatedOperad<F> p(a.field);
  p.max_arity = 1;
  p.dims = {w, a.dim};
  p.unit = a.unit;
  p.action.resize(2);
  detail::allocate_pcomps(p);
  p.pcomp.at({1, 1, 0}) = a.mult;
  p.pcomp.at({1, 0, 0}) = act;
  return p;
}

/// The unital associative operad: P(0) = K, P(n) = K[S_n] with basis all
/// of S_n in lexicographic rank order, compositions by substitution of
/// reading words.
template <Field F>
TruncatedOperad<F> build_uassoc_operad(const F& field, int max_arity) {
  if (max_arity < 1 || max_arity > kMaxSymmetricArity)
    throw budget_error("build_uassoc_operad: max_arity outside 1.." +
                       std::to_string(kMaxSymmetricArity));
  TruncatedOperad<F> p(field);
  p.max_arity = max_arity;
  p.dims.resize(max_arity + 1);
  p.dims[0] = 1;
  long fact = 1;
  for (int n = 1; n <= max_arity; ++n) {
    fact *= n;
    p.dims[n] = static_cast<int>(fact);
  }
  p.unit = {field.one()};
  p.action.resize(max_arity + 1);
  std::vector<std::vector<Permutation>> groups(max_arity + 1);
  for (int n = 0; n <= max_arity; ++n) groups[n] = all_permutations(n);
  // Left regular action: s_k sends the basis element tau to s_k o tau.
  for (int n = 2; n <= max_arity; ++n) {
    p.action[n].reserve(n - 1);
    for (int k = 0; k + 1 < n; ++k) {
      LinearMap<F> m(field, p.dims[n], p.dims[n]);
      auto sk = Permutation::adjacent(n, k);
      for (int col = 0; col < p.dims[n]; ++col)
        m.at(static_cast<int>(permutation_rank(compose(sk, groups[n][col]))),
             col) = field.one();
      p.action[n].push_back(std::move(m));
    }
  }
  detail::allocate_pcomps(p);
  // sigma o_i tau reads the word of sigma and splices in the word of tau
  // (shifted into the block [i, i+n)) where sigma reads slot i; letters
  // above i shift up by n-1. For n = 0 the slot is deleted and the word
  // standardized.
  for (auto& [key, c] : p.pcomp) {
    auto [m, n, i] = key;
    for (int a = 0; a < p.dims[m]; ++a)
      for (int b = 0; b < p.dims[n]; ++b) {
        const auto& sigma = groups[m][a];
        const auto& tau = groups[n][b];
        std::vector<int> word;
        word.reserve(m + n - 1);
        for (int j = 0; j < m; ++j) {
          int k = sigma(j);
          if (k < i)
            word.push_back(k);
          else if (k == i)
            for (int t = 0; t < n; ++t) word.push_back(i + tau(t));
          else
            word.push_back(k + n - 1);
        }
        long out = permutation_rank(Permutation(word));
        c.at(static_cast<int>(out), a * p.dims[n] + b) = field.one();
      }
  }
  return p;
}

/// The coendomorphism operad of V = K^d: P(n) = Hom(V, V^(x)n), basis
/// matrix units flattened row-major, f o_i g = (1 (x) g (x) 1) o f, the
/// group acting by permuting output factors.
template <Field F>
TruncatedOperad<F> build_coend_operad(const F& field, int d, int max_arity) {
  if (d < 0 || max_arity < 1)
    throw std::invalid_argument("build_coend_operad: bad parameters");
  if (d > 1 && detail::ipow(d, max_arity + 1) > kHomOperadDimBudget)
    throw budget_error("build_coend_operad: d^(N+1) exceeds " +
                       std::to_string(kHomOperadDimBudget));
  TruncatedOperad<F> p(field);
  p.max_arity = max_arity;
  p.dims.resize(max_arity + 1);
  for (int n = 0; n <= max_arity; ++n)
    p.dims[n] = static_cast<int>(detail::ipow(d, n + 1));
  p.unit.assign(p.dims[1], field.zero());
  for (int i = 0; i < d; ++i) p.unit[i * d + i] = field.one();
  p.action.resize(max_arity + 1);
  for (int n = 2; n <= max_arity; ++n)
    for (int k = 0; k + 1 < n; ++k)
      p.action[n].push_back(tensor(
          perm_on_tensor_power(field, Permutation::adjacent(n, k), d),
          LinearMap<F>::identity(field, d)));
  detail::allocate_pcomps(p);
  for (auto& [key, c] : p.pcomp) {
    auto [m, n, i] = key;
    const long dm = detail::ipow(d, m), dn = detail::ipow(d, n);
    for (long r = 0; r < dm; ++r) {
      auto rd = detail::to_digits(r, d, m);
      for (long s = 0; s < dn; ++s) {
        auto sd = detail::to_digits(s, d, n);
        // Output multi-index: digits of r with digit i replaced by the
        // block s; defined when the inserted map eats exactly e_{r_i}.
        std::vector<int> out;
        out.reserve(m + n - 1);
        for (int j = 0; j < i; ++j) out.push_back(rd[j]);
        for (int t = 0; t < n; ++t) out.push_back(sd[t]);
        for (int j = i + 1; j < m; ++j) out.push_back(rd[j]);
        long big = detail::from_digits(out, d);
        int e = rd[i];
        for (int cc = 0; cc < d; ++cc)
          c.at(static_cast<int>(big * d + cc),
               static_cast<int>((r * d + cc) * p.dims[n] + (s * d + e))) =
              field.one();
      }
    }
  }
  return p;
}

/// The endomorphism operad of V = K^d: P(n) = Hom(V^(x)n, V), basis
/// matrix units flattened row-major, f o_i g = f o (1 (x) g (x) 1), the
/// group acting by permuting input factors.
template <Field F>
TruncatedOperad<F> build_end_operad(const F& field, int d, int max_arity) {
  if (d < 0 || max_arity < 1)
    throw std::invalid_argument("build_end_operad: bad parameters");
  if (d > 1 && detail::ipow(d, max_arity + 1) > kHomOperadDimBudget)
    throw budget_error("build_end_operad: d^(N+1) exceeds " +
                       std::to_string(kHomOperadDimBudget));
  TruncatedOperad<F> p(field);
  p.max_arity = max_arity;
  p.dims.resize(max_arity + 1);
  for (int n = 0; n <= max_arity; ++n)
    p.dims[n] = static_cast<int>(detail::ipow(d, n + 1));
  p.unit.assign(p.dims[1], field.zero());
  for (int i = 0; i < d; ++i) p.unit[i * d + i] = field.one();
  p.action.resize(max_arity + 1);
  for (int n = 2; n <= max_arity; ++n)
    for (int k = 0; k + 1 < n; ++k)
      p.action[n].push_back(tensor(
          LinearMap<F>::identity(field, d),
          perm_on_tensor_power(field, Permutation::adjacent(n, k), d)));
  detail::allocate_pcomps(p);
  for (auto& [key, c] : p.pcomp) {
    auto [m, n, i] = key;
    const long dm = detail::ipow(d, m), dn = detail::ipow(d, n);
    const long dout = detail::ipow(d, m + n - 1);
    for (int r = 0; r < d; ++r)
      for (long cm = 0; cm < dm; ++cm) {
        auto cd = detail::to_digits(cm, d, m);
        int s = cd[i];
        for (long e = 0; e < dn; ++e) {
          auto ed = detail::to_digits(e, d, n);
          std::vector<int> out;
          out.reserve(m + n - 1);
          for (int j = 0; j < i; ++j) out.push_back(cd[j]);
          for (int t = 0; t < n; ++t) out.push_back(ed[t]);
          for (int j = i + 1; j < m; ++j) out.push_back(cd[j]);
          long big = detail::from_digits(out, d);
          c.at(static_cast<int>(r * dout + big),
               static_cast<int>((r * dm + cm) * p.dims[n] + (s * dn + e))) =
              field.one();
        }
      }
  }
  return p;
}

/// Transposition of matrix units, as the component maps of the duality
/// End(W) -> Coend(W*) (and back for the other direction): a map
/// W^(x)n -> W turns into its transpose W* -> (W*)^(x)n.
template <Field F>
OperadMorphism<F> dual_iso_end_to_coend(const F& field, int d, int max_arity) {
  OperadMorphism<F> phi{build_end_operad(field, d, max_arity),
                        build_coend_operad(field, d, max_arity),
                        {}};
  for (int n = 0; n <= max_arity; ++n) {
    const long dn = detail::ipow(d, n);
    LinearMap<F> comp(field, phi.target.dims[n], phi.source.dims[n]);
    for (int r = 0; r < d; ++r)
      for (long c = 0; c < dn; ++c)
        comp.at(static_cast<int>(c * d + r), static_cast<int>(r * dn + c)) =
            field.one();
    phi.components.push_back(std::move(comp));
  }
  return phi;
}

template <Field F>
OperadMorphism<F> dual_iso_coend_to_end(const F& field, int d, int max_arity) {
  OperadMorphism<F> phi{build_coend_operad(field, d, max_arity),
                        build_end_operad(field, d, max_arity),
                        {}};
  for (int n = 0; n <= max_arity; ++n) {
    const long dn = detail::ipow(d, n);
    LinearMap<F> comp(field, phi.target.dims[n], phi.source.dims[n]);
    for (long c = 0; c < dn; ++c)
      for (int r = 0; r < d; ++r)
        comp.at(static_cast<int>(r * dn + c), static_cast<int>(c * d + r)) =
            field.one();
    phi.components.push_back(std::move(comp));
  }
  return phi;
}

/// Embeds the associative operad into End(A) for a unital algebra A: the
/// basis permutation sigma goes to the multiplication in the order read
/// off sigma, (a_0, .., a_{n-1}) -> a_{sigma(0)} ... a_{sigma(n-1)}.
template <Field F>
OperadMorphism<F> uassoc_to_end(const AlgebraData<F>& a, int max_arity) {
  const F& k = a.field;
  OperadMorphism<F> phi{build_uassoc_operad(k, max_arity),
                        build_end_operad(k, a.dim, max_arity),
                        {}};
  // mult_n : A^(x)n -> A, left-nested product; n = 0 is the unit element.
  std::vector<LinearMap<F>> mult_n;
  mult_n.push_back(a.unit_map());
  mult_n.push_back(LinearMap<F>::identity(k, a.dim));
  for (int n = 2; n <= max_arity; ++n)
    mult_n.push_back(compose(
        a.mult, tensor(mult_n[n - 1], LinearMap<F>::identity(k, a.dim))));
  for (int n = 0; n <= max_arity; ++n) {
    LinearMap<F> comp(k, phi.target.dims[n], phi.source.dims[n]);
    auto group = all_permutations(n);
    for (std::size_t col = 0; col < group.size(); ++col) {
      auto mat = compose(mult_n[n],
                         perm_on_tensor_power(k, group[col].inverse(), a.dim));
      for (int idx = 0; idx < phi.target.dims[n]; ++idx)
        comp.at(idx, static_cast<int>(col)) =
            mat.entries()[static_cast<std::size_t>(idx)];
    }
    phi.components.push_back(std::move(comp));
  }
  return phi;
}

}  // namespace opcheck
