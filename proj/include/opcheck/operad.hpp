#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opcheck/check_report.hpp"
#include "opcheck/linear_map.hpp"
#include "opcheck/permutation.hpp"
#include "opcheck/solve.hpp"

namespace opcheck {

// A symmetric operad in finite-dimensional vector spaces, truncated at a
// maximal arity N: spaces P(0), .., P(N), a unit in P(1), right-group
// structure on each P(n) stored through the matrices of the adjacent
// transpositions, and partial compositions
//
//   comp(m, n, i) : P(m) (x) P(n) -> P(m+n-1),   0 <= i < m,
//
// for every (m, n) with m >= 1 and m + n - 1 <= N. Compositions whose
// output arity would exceed N are simply absent; every axiom is checked
// on the instances where all participating maps exist.

struct PcompKey {
  int m = 0, n = 0, slot = 0;
  friend auto operator<=>(const PcompKey&, const PcompKey&) = default;
};

/// Whether comp(m, n, slot) must exist in a truncation at max_arity.
inline bool pcomp_in_range(int max_arity, int m, int n, int slot) {
  return m >= 1 && n >= 0 && slot >= 0 && slot < m && m <= max_arity &&
         n <= max_arity && m + n - 1 <= max_arity;
}

template <Field F>
struct TruncatedOperad {
  using Elt = typename F::Elt;

  F field;
  int max_arity = 0;
  std::vector<int> dims;                          // dims[n], n = 0..max_arity
  std::vector<Elt> unit;                          // element of P(1)
  std::vector<std::vector<LinearMap<F>>> action;  // action[n][k] = matrix of s_k on P(n)
  std::map<PcompKey, LinearMap<F>> pcomp;

  explicit TruncatedOperad(const F& f) : field(f) {}

  int dim(int n) const {
    if (n < 0 || n > max_arity)
      throw std::invalid_argument("operad: arity " + std::to_string(n) +
                                  " outside truncation");
    return dims[n];
  }

  bool has_comp(int m, int n, int slot) const {
    return pcomp.count({m, n, slot}) > 0;
  }

  const LinearMap<F>& comp(int m, int n, int slot) const {
    auto it = pcomp.find({m, n, slot});
    if (it == pcomp.end())
      throw std::invalid_argument("operad: missing composition (" +
                                  std::to_string(m) + "," + std::to_string(n) +
                                  "," + std::to_string(slot + 1) + ")");
    return it->second;
  }

  /// The unit as a map K -> P(1).
  LinearMap<F> unit_map() const {
    return LinearMap<F>::column(field, unit);
  }

  /// Matrix of sigma acting on P(n), from the stored transposition
  /// matrices via an adjacent-transposition word.
  LinearMap<F> act(int n, const Permutation& sigma) const {
    if (sigma.degree() != n)
      throw std::invalid_argument("operad act: degree mismatch");
    LinearMap<F> m = LinearMap<F>::identity(field, dim(n));
    for (int k : sigma.adjacent_word()) m = compose(m, action[n][k]);
    return m;
  }
};

/// Largest group enumerated during axiom checks; S_n for n > this is out
/// of reach and the checker refuses rather than silently skipping.
inline constexpr int kMaxSymmetricArity = 6;

namespace detail {

/// First (row, col) where two equal-shaped maps differ; the column is the
/// witness basis element of the domain on which the identity fails.
template <Field F>
std::optional<std::pair<int, int>> first_diff(const LinearMap<F>& a,
                                              const LinearMap<F>& b) {
  for (int c = 0; c < a.dom(); ++c)
    for (int r = 0; r < a.cod(); ++r)
      if (!(a.at(r, c) == b.at(r, c))) return std::make_pair(r, c);
  return std::nullopt;
}

template <Field F>
void fail_with_witness(CheckReport& report, const LinearMap<F>& lhs,
                       const LinearMap<F>& rhs, std::string check,
                       std::map<std::string, long> where) {
  auto d = first_diff(lhs, rhs);
  if (!d) return;
  where["witness_col"] = d->second;
  where["witness_row"] = d->first;
  report.fail(std::move(check), std::move(where));
}

template <Field F>
bool shapes_ok(const TruncatedOperad<F>& p, CheckReport& report) {
  bool ok = true;
  if (static_cast<int>(p.dims.size()) != p.max_arity + 1) {
    report.fail("shape-dims", {}, "dims list does not cover 0..max_arity");
    return false;
  }
  for (int n = 0; n <= p.max_arity; ++n)
    if (p.dims[n] < 0) {
      report.fail("shape-dims", {{"n", n}}, "negative dimension");
      ok = false;
    }
  if (p.max_arity < 1 ||
      static_cast<int>(p.unit.size()) != (p.max_arity >= 1 ? p.dims[1] : 0)) {
    report.fail("shape-unit", {}, "unit is not an element of P(1)");
    ok = false;
  }
  if (static_cast<int>(p.action.size()) != p.max_arity + 1) {
    report.fail("shape-action", {}, "action list does not cover 0..max_arity");
    return false;
  }
  for (int n = 0; n <= p.max_arity; ++n) {
    int expect = n >= 2 ? n - 1 : 0;
    if (static_cast<int>(p.action[n].size()) != expect) {
      report.fail("shape-action", {{"n", n}},
                  "expected " + std::to_string(expect) + " transposition matrices");
      ok = false;
      continue;
    }
    for (int k = 0; k < expect; ++k)
      if (p.action[n][k].dom() != p.dims[n] || p.action[n][k].cod() != p.dims[n]) {
        report.fail("shape-action", {{"n", n}, {"k", k}}, "matrix is not square of dim P(n)");
        ok = false;
      }
  }
  for (int m = 1; m <= p.max_arity; ++m)
    for (int n = 0; m + n - 1 <= p.max_arity && n <= p.max_arity; ++n)
      for (int i = 0; i < m; ++i) {
        if (!p.has_comp(m, n, i)) {
          report.fail("pcomp-missing", {{"m", m}, {"n", n}, {"i", i + 1}});
          ok = false;
          continue;
        }
        const auto& c = p.comp(m, n, i);
        if (c.dom() != p.dims[m] * p.dims[n] || c.cod() != p.dims[m + n - 1]) {
          report.fail("pcomp-shape", {{"m", m}, {"n", n}, {"i", i + 1}},
                      "got " + c.shape_string());
          ok = false;
        }
      }
  for (const auto& [key, c] : p.pcomp)
    if (!pcomp_in_range(p.max_arity, key.m, key.n, key.slot)) {
      report.fail("pcomp-extraneous",
                  {{"m", key.m}, {"n", key.n}, {"i", key.slot + 1}});
      ok = false;
    }
  return ok;
}

}  // namespace detail

/// Verify the truncated symmetric operad axioms: group relations for the
/// stored transpositions, two-sided unit laws, sequential and parallel
/// associativity, and equivariance in both tensor slots, each quantified
/// over all instances defined under the truncation. Returns a report with
/// one finding per failed instance.
template <Field F>
CheckReport check_operad_axioms(const TruncatedOperad<F>& p) {
  CheckReport report;
  if (!detail::shapes_ok(p, report)) return report;
  if (p.max_arity > kMaxSymmetricArity)
    throw budget_error("check_operad_axioms: group enumeration beyond S_" +
                       std::to_string(kMaxSymmetricArity));
  const F& k = p.field;

  // Coxeter presentation: the stored matrices must satisfy it for act()
  // to be well defined on reduced words.
  for (int n = 2; n <= p.max_arity; ++n) {
    const auto& s = p.action[n];
    auto id = LinearMap<F>::identity(k, p.dims[n]);
    for (int a = 0; a + 1 < n; ++a) {
      detail::fail_with_witness(report, compose(s[a], s[a]), id,
                                "group-involution", {{"n", n}, {"k", a}});
      for (int b = a + 1; b + 1 < n; ++b) {
        if (b == a + 1)
          detail::fail_with_witness(report, compose(s[a], compose(s[b], s[a])),
                                    compose(s[b], compose(s[a], s[b])),
                                    "group-braid", {{"n", n}, {"k", a}});
        else
          detail::fail_with_witness(report, compose(s[a], s[b]),
                                    compose(s[b], s[a]), "group-commute",
                                    {{"n", n}, {"ka", a}, {"kb", b}});
      }
    }
  }

  if (p.max_arity >= 1 && p.dims[1] > 0) {
    bool unit_zero = true;
    for (const auto& e : p.unit)
      if (!k.is_zero(e)) unit_zero = false;
    if (unit_zero) report.fail("unit-zero", {}, "unit element vanishes");
  }

  auto id_of = [&](int n) { return LinearMap<F>::identity(k, p.dims[n]); };
  auto u = p.unit_map();

  // Unit laws. Right: composing the unit into any slot of P(m) is the
  // identity. Left: composing anything into the unit is the identity.
  for (int m = 1; m <= p.max_arity; ++m)
    for (int i = 0; i < m; ++i) {
      if (!p.has_comp(m, 1, i)) continue;
      detail::fail_with_witness(report,
                                compose(p.comp(m, 1, i), tensor(id_of(m), u)),
                                id_of(m), "unit-right", {{"m", m}, {"i", i + 1}});
    }
  for (int n = 0; n <= p.max_arity; ++n) {
    if (!p.has_comp(1, n, 0)) continue;
    detail::fail_with_witness(report,
                              compose(p.comp(1, n, 0), tensor(u, id_of(n))),
                              id_of(n), "unit-left", {{"n", n}});
  }

  // Sequential associativity: substituting into slot i and then into a
  // slot of the inserted factor agrees with composing inside first.
  for (int m = 1; m <= p.max_arity; ++m)
    for (int n = 1; n <= p.max_arity; ++n)
      for (int l = 0; l <= p.max_arity; ++l) {
        if (m + n + l - 2 > p.max_arity) continue;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) {
            if (!p.has_comp(m, n, i) || !p.has_comp(m + n - 1, l, i + j) ||
                !p.has_comp(n, l, j) || !p.has_comp(m, n + l - 1, i))
              continue;
            auto lhs = compose(p.comp(m + n - 1, l, i + j),
                               tensor(p.comp(m, n, i), id_of(l)));
            auto rhs = compose(p.comp(m, n + l - 1, i),
                               tensor(id_of(m), p.comp(n, l, j)));
            detail::fail_with_witness(
                report, lhs, rhs, "assoc-sequential",
                {{"m", m}, {"n", n}, {"l", l}, {"i", i + 1}, {"j", j + 1}});
          }
      }

  // Parallel associativity: substitutions into distinct slots i < j
  // commute (up to the slot shift and a swap of the inserted arguments).
  for (int m = 2; m <= p.max_arity; ++m)
    for (int n = 0; n <= p.max_arity; ++n)
      for (int l = 0; l <= p.max_arity; ++l) {
        if (m + n + l - 2 > p.max_arity) continue;
        for (int i = 0; i < m; ++i)
          for (int j = i + 1; j < m; ++j) {
            if (!p.has_comp(m, n, i) || !p.has_comp(m + n - 1, l, j + n - 1) ||
                !p.has_comp(m, l, j) || !p.has_comp(m + l - 1, n, i))
              continue;
            auto lhs = compose(p.comp(m + n - 1, l, j + n - 1),
                               tensor(p.comp(m, n, i), id_of(l)));
            auto rhs = compose(
                p.comp(m + l - 1, n, i),
                compose(tensor(p.comp(m, l, j), id_of(n)),
                        tensor(id_of(m), swap_factors(k, p.dims[n], p.dims[l]))));
            detail::fail_with_witness(
                report, lhs, rhs, "assoc-parallel",
                {{"m", m}, {"n", n}, {"l", l}, {"i", i + 1}, {"j", j + 1}});
          }
      }

  // Equivariance. Outer: permuting the outer factor relabels the slot and
  // acts on the output by the blown-up permutation. Inner: permuting the
  // inserted factor acts on the output inside the block [i, i+n).
  for (const auto& [key, c] : p.pcomp) {
    auto [m, n, i] = key;
    if (m >= 2 && m <= kMaxSymmetricArity)
      for (const auto& sigma : all_permutations(m)) {
        if (sigma.is_identity()) continue;
        if (!p.has_comp(m, n, sigma(i))) continue;
        auto lhs = compose(p.comp(m, n, sigma(i)),
                           tensor(p.act(m, sigma), id_of(n)));
        auto rhs = compose(p.act(m + n - 1, blow_up(sigma, i, n)), c);
        detail::fail_with_witness(report, lhs, rhs, "equivariance-outer",
                                  {{"m", m}, {"n", n}, {"i", i + 1},
                                   {"sigma", permutation_rank(sigma)}});
      }
    if (n >= 2 && n <= kMaxSymmetricArity)
      for (const auto& tau : all_permutations(n)) {
        if (tau.is_identity()) continue;
        auto lhs = compose(c, tensor(id_of(m), p.act(n, tau)));
        auto rhs = compose(p.act(m + n - 1, block_shift(tau, i, m)), c);
        detail::fail_with_witness(report, lhs, rhs, "equivariance-inner",
                                  {{"m", m}, {"n", n}, {"i", i + 1},
                                   {"tau", permutation_rank(tau)}});
      }
  }

  return report;
}

/// Recompute one axiom instance from a finding produced by
/// check_operad_axioms. True means the instance holds.
template <Field F>
bool check_single_axiom(const TruncatedOperad<F>& p, const Finding& f) {
  const F& k = p.field;
  auto id_of = [&](int n) { return LinearMap<F>::identity(k, p.dim(n)); };
  auto at = [&](const char* key) { return static_cast<int>(f.where.at(key)); };
  const std::string& c = f.check;
  if (c == "group-involution") {
    const auto& s = p.action[at("n")][at("k")];
    return compose(s, s) == id_of(at("n"));
  }
  if (c == "group-braid") {
    const auto& a = p.action[at("n")][at("k")];
    const auto& b = p.action[at("n")][at("k") + 1];
    return compose(a, compose(b, a)) == compose(b, compose(a, b));
  }
  if (c == "group-commute") {
    const auto& a = p.action[at("n")][at("ka")];
    const auto& b = p.action[at("n")][at("kb")];
    return compose(a, b) == compose(b, a);
  }
  if (c == "unit-zero") {
    for (const auto& e : p.unit)
      if (!k.is_zero(e)) return true;
    return false;
  }
  if (c == "unit-right") {
    int m = at("m"), i = at("i") - 1;
    return compose(p.comp(m, 1, i), tensor(id_of(m), p.unit_map())) == id_of(m);
  }
  if (c == "unit-left") {
    int n = at("n");
    return compose(p.comp(1, n, 0), tensor(p.unit_map(), id_of(n))) == id_of(n);
  }
  if (c == "assoc-sequential") {
    int m = at("m"), n = at("n"), l = at("l"), i = at("i") - 1, j = at("j") - 1;
    return compose(p.comp(m + n - 1, l, i + j), tensor(p.comp(m, n, i), id_of(l))) ==
           compose(p.comp(m, n + l - 1, i), tensor(id_of(m), p.comp(n, l, j)));
  }
  if (c == "assoc-parallel") {
    int m = at("m"), n = at("n"), l = at("l"), i = at("i") - 1, j = at("j") - 1;
    return compose(p.comp(m + n - 1, l, j + n - 1),
                   tensor(p.comp(m, n, i), id_of(l))) ==
           compose(p.comp(m + l - 1, n, i),
                   compose(tensor(p.comp(m, l, j), id_of(n)),
                           tensor(id_of(m), swap_factors(k, p.dim(n), p.dim(l)))));
  }
  if (c == "equivariance-outer") {
    int m = at("m"), n = at("n"), i = at("i") - 1;
    auto sigma = all_permutations(m).at(f.where.at("sigma"));
    return compose(p.comp(m, n, sigma(i)), tensor(p.act(m, sigma), id_of(n))) ==
           compose(p.act(m + n - 1, blow_up(sigma, i, n)), p.comp(m, n, i));
  }
  if (c == "equivariance-inner") {
    int m = at("m"), n = at("n"), i = at("i") - 1;
    auto tau = all_permutations(n).at(f.where.at("tau"));
    return compose(p.comp(m, n, i), tensor(id_of(m), p.act(n, tau))) ==
           compose(p.act(m + n - 1, block_shift(tau, i, m)), p.comp(m, n, i));
  }
  throw std::invalid_argument("check_single_axiom: unknown check '" + c + "'");
}

/// The reduced part: same operad with P(0) replaced by 0. Compositions
/// into or out of arity 0 become maps to/from the zero space.
template <Field F>
TruncatedOperad<F> reduced_part(const TruncatedOperad<F>& p) {
  TruncatedOperad<F> r = p;
  r.dims[0] = 0;
  // Only keys with n == 0 touch P(0): their domain becomes the zero
  // space, and for m == 1 so does the codomain P(m-1).
  for (auto& [key, c] : r.pcomp)
    if (key.n == 0) c = LinearMap<F>(p.field, r.dims[key.m - 1], 0);
  return r;
}

// A morphism of truncated operads with identical truncation arity: one
// component P(n) -> Q(n) per arity, compatible with units, actions and
// compositions.
template <Field F>
struct OperadMorphism {
  TruncatedOperad<F> source;
  TruncatedOperad<F> target;
  std::vector<LinearMap<F>> components;  // components[n]: P(n) -> Q(n)
};

template <Field F>
CheckReport check_operad_morphism(const OperadMorphism<F>& phi) {
  CheckReport report;
  const auto& p = phi.source;
  const auto& q = phi.target;
  if (!(p.field == q.field)) {
    report.fail("morphism-field", {}, "source and target fields differ");
    return report;
  }
  if (p.max_arity != q.max_arity) {
    report.fail("morphism-arity", {}, "source and target truncations differ");
    return report;
  }
  if (static_cast<int>(phi.components.size()) != p.max_arity + 1) {
    report.fail("morphism-shape", {}, "component list does not cover 0..max_arity");
    return report;
  }
  for (int n = 0; n <= p.max_arity; ++n) {
    const auto& c = phi.components[n];
    if (c.dom() != p.dims[n] || c.cod() != q.dims[n]) {
      report.fail("morphism-shape", {{"n", n}}, "got " + c.shape_string());
      return report;
    }
  }
  detail::fail_with_witness(report, compose(phi.components[1], p.unit_map()),
                            q.unit_map(), "morphism-unit", {});
  for (int n = 2; n <= p.max_arity; ++n)
    for (int k = 0; k + 1 < n; ++k)
      detail::fail_with_witness(report,
                                compose(phi.components[n], p.action[n][k]),
                                compose(q.action[n][k], phi.components[n]),
                                "morphism-action", {{"n", n}, {"k", k}});
  for (const auto& [key, c] : p.pcomp) {
    if (!q.has_comp(key.m, key.n, key.slot)) {
      report.fail("morphism-missing-comp",
                  {{"m", key.m}, {"n", key.n}, {"i", key.slot + 1}});
      continue;
    }
    auto lhs = compose(phi.components[key.m + key.n - 1], c);
    auto rhs = compose(q.comp(key.m, key.n, key.slot),
                       tensor(phi.components[key.m], phi.components[key.n]));
    detail::fail_with_witness(
        report, lhs, rhs, "morphism-comp",
        {{"m", key.m}, {"n", key.n}, {"i", key.slot + 1}});
  }
  return report;
}

}  // namespace opcheck
