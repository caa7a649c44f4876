#pragma once

#include <string>
#include <vector>

#include "opcheck/algebra.hpp"
#include "opcheck/multi_index.hpp"
#include "opcheck/operad.hpp"
#include "opcheck/operad_builders.hpp"

namespace opcheck {

// A coalgebra over a truncated operad P: a space V with structure maps
//
//   rho_n : P(n) (x) V -> V^(x)n,
//
// equivalently an operad morphism P -> Coend(V). The checker verifies the
// morphism formulation slice by slice, so the coendomorphism operad is
// never materialized; its largest composition matrix would dwarf every
// other object in a run.

template <Field F>
struct CoalgebraOverOperad {
  TruncatedOperad<F> operad;
  int dim = 0;                     // dim V
  std::vector<LinearMap<F>> maps;  // maps[n]: P(n) (x) V -> V^(x)n
};

/// The structure map of one basis element b of P(n): V -> V^(x)n.
template <Field F>
LinearMap<F> coalgebra_slice(const CoalgebraOverOperad<F>& c, int n, int b) {
  const LinearMap<F>& m = c.maps.at(n);
  const int d = c.dim;
  LinearMap<F> g(c.operad.field, m.cod(), d);
  for (int col = 0; col < d; ++col)
    for (int r = 0; r < m.cod(); ++r) g.at(r, col) = m.at(r, b * d + col);
  return g;
}

/// Component P(n) -> Coend(V)(n) of the induced operad morphism; column b
/// is the vectorized slice of b.
template <Field F>
LinearMap<F> induced_component(const CoalgebraOverOperad<F>& c, int n) {
  const F& k = c.operad.field;
  const int d = c.dim;
  const int pn = c.operad.dim(n);
  const long dn = detail::ipow(d, n);
  LinearMap<F> comp(k, static_cast<int>(dn * d), pn);
  for (int b = 0; b < pn; ++b)
    for (int r = 0; r < dn; ++r)
      for (int cc = 0; cc < d; ++cc)
        comp.at(static_cast<int>(r * d + cc), b) =
            c.maps[n].at(static_cast<int>(r), b * d + cc);
  return comp;
}

/// The morphism P -> Coend(V) in explicit form. Only viable for small
/// d and N (the coend builder's budget applies); the checker below covers
/// the general case without this object.
template <Field F>
OperadMorphism<F> coalgebra_to_morphism(const CoalgebraOverOperad<F>& c) {
  OperadMorphism<F> phi{c.operad,
                        build_coend_operad(c.operad.field, c.dim,
                                           c.operad.max_arity),
                        {}};
  for (int n = 0; n <= c.operad.max_arity; ++n)
    phi.components.push_back(induced_component(c, n));
  return phi;
}

inline constexpr long kCoalgebraEntryBudget = 1L << 24;

namespace detail {

template <Field F>
bool coalgebra_shapes_ok(const CoalgebraOverOperad<F>& c, CheckReport& report) {
  const auto& p = c.operad;
  if (c.dim < 0) {
    report.fail("coalgebra-shape", {}, "negative dimension");
    return false;
  }
  if (static_cast<int>(c.maps.size()) != p.max_arity + 1) {
    report.fail("coalgebra-shape", {}, "maps list does not cover 0..max_arity");
    return false;
  }
  bool ok = true;
  for (int n = 0; n <= p.max_arity; ++n) {
    long dn = ipow(c.dim, n);
    if (dn * c.dim > kCoalgebraEntryBudget)
      throw budget_error("check_coalgebra: tensor power dimension exceeds budget");
    if (c.maps[n].cod() != dn || c.maps[n].dom() != p.dims[n] * c.dim) {
      report.fail("coalgebra-shape", {{"n", n}},
                  "got " + c.maps[n].shape_string());
      ok = false;
    }
  }
  return ok;
}

}  // namespace detail

/// Verify that the structure maps define an operad morphism P -> Coend(V):
/// unit law, equivariance against the stored transpositions, and
/// compatibility with every composition present in the truncation,
///
///   rho_{m+n-1} o (comp(m,n,i) (x) 1) =
///     (1^i (x) rho-slice (x) 1^{m-1-i}) o rho_m   per basis pair.
template <Field F>
CheckReport check_coalgebra(const CoalgebraOverOperad<F>& c) {
  CheckReport report;
  if (!detail::coalgebra_shapes_ok(c, report)) return report;
  const auto& p = c.operad;
  const F& k = p.field;
  const int d = c.dim;
  auto id_v = LinearMap<F>::identity(k, d);

  detail::fail_with_witness(report, compose(c.maps[1], tensor(p.unit_map(), id_v)),
                            id_v, "coalgebra-unit", {});

  for (int n = 2; n <= p.max_arity; ++n)
    for (int kk = 0; kk + 1 < n; ++kk) {
      auto lhs = compose(c.maps[n], tensor(p.action[n][kk], id_v));
      auto rhs = compose(
          perm_on_tensor_power(k, Permutation::adjacent(n, kk), d), c.maps[n]);
      detail::fail_with_witness(report, lhs, rhs, "coalgebra-action",
                                {{"n", n}, {"k", kk}});
    }

  for (const auto& [key, comp_map] : p.pcomp) {
    auto [m, n, i] = key;
    const long out_dim = detail::ipow(d, m + n - 1);
    const long cols = static_cast<long>(p.dims[m]) * p.dims[n] * d;
    if (out_dim * cols > kCoalgebraEntryBudget)
      throw budget_error("check_coalgebra: composition check exceeds budget");
    auto lhs = compose(c.maps[m + n - 1], tensor(comp_map, id_v));
    LinearMap<F> rhs(k, static_cast<int>(out_dim), static_cast<int>(cols));
    auto id_pre = LinearMap<F>::identity(k, static_cast<int>(detail::ipow(d, i)));
    auto id_post =
        LinearMap<F>::identity(k, static_cast<int>(detail::ipow(d, m - 1 - i)));
    for (int a = 0; a < p.dims[m]; ++a) {
      auto ga = coalgebra_slice(c, m, a);
      for (int b = 0; b < p.dims[n]; ++b) {
        auto gb = coalgebra_slice(c, n, b);
        auto rab = compose(tensor(tensor(id_pre, gb), id_post), ga);
        for (int cc = 0; cc < d; ++cc)
          for (int r = 0; r < rab.cod(); ++r)
            rhs.at(r, (a * p.dims[n] + b) * d + cc) = rab.at(r, cc);
      }
    }
    detail::fail_with_witness(report, lhs, rhs, "coalgebra-comp",
                              {{"m", m}, {"n", n}, {"i", i + 1}});
  }
  return report;
}

/// f: V -> W is a morphism of P-coalgebras when every slice satisfies
/// G^W_b o f = f^(x)n o G^V_b. Both coalgebras must live over operads of
/// identical shape; the caller is responsible for them being the same P.
template <Field F>
CheckReport check_coalgebra_morphism(const CoalgebraOverOperad<F>& cv,
                                     const CoalgebraOverOperad<F>& cw,
                                     const LinearMap<F>& f) {
  CheckReport report;
  if (cv.operad.max_arity != cw.operad.max_arity ||
      cv.operad.dims != cw.operad.dims) {
    report.fail("comorphism-operad", {}, "operad shapes differ");
    return report;
  }
  if (f.dom() != cv.dim || f.cod() != cw.dim) {
    report.fail("comorphism-shape", {}, "got " + f.shape_string());
    return report;
  }
  for (int n = 0; n <= cv.operad.max_arity; ++n) {
    if (detail::ipow(cw.dim, n) * cv.dim > kCoalgebraEntryBudget)
      throw budget_error("check_coalgebra_morphism: tensor power exceeds budget");
    auto fn = tensor_power(f, n);
    for (int b = 0; b < cv.operad.dims[n]; ++b)
      detail::fail_with_witness(report,
                                compose(coalgebra_slice(cw, n, b), f),
                                compose(fn, coalgebra_slice(cv, n, b)),
                                "comorphism", {{"n", n}, {"b", b}});
  }
  return report;
}

/// Coassociative counital comultiplication as a coalgebra over the unital
/// associative operad: the basis permutation sigma of P(n) acts by the
/// n-fold comultiplication followed by sigma on the output factors.
template <Field F>
CoalgebraOverOperad<F> uassoc_coalgebra(const F& field, int max_arity,
                                        const LinearMap<F>& delta,
                                        const LinearMap<F>& eps) {
  const int d = delta.dom();
  if (delta.cod() != d * d)
    throw std::invalid_argument("uassoc_coalgebra: delta must map V -> V (x) V");
  if (eps.dom() != d || eps.cod() != 1)
    throw std::invalid_argument("uassoc_coalgebra: eps must be a functional on V");
  CoalgebraOverOperad<F> c{build_uassoc_operad(field, max_arity), d, {}};
  // it[n]: V -> V^(x)n, left-nested iterate of delta; it[0] = eps.
  std::vector<LinearMap<F>> it;
  it.push_back(eps);
  it.push_back(LinearMap<F>::identity(field, d));
  for (int n = 2; n <= max_arity; ++n)
    it.push_back(compose(
        tensor(delta, LinearMap<F>::identity(field,
                                             static_cast<int>(detail::ipow(d, n - 2)))),
        it[n - 1]));
  c.maps.push_back(eps);
  for (int n = 1; n <= max_arity; ++n) {
    const auto group = all_permutations(n);
    const long dn = detail::ipow(d, n);
    LinearMap<F> m(field, static_cast<int>(dn), c.operad.dims[n] * d);
    for (std::size_t a = 0; a < group.size(); ++a) {
      auto g = compose(perm_on_tensor_power(field, group[a], d), it[n]);
      for (int cc = 0; cc < d; ++cc)
        for (int r = 0; r < g.cod(); ++r)
          m.at(r, static_cast<int>(a) * d + cc) = g.at(r, cc);
    }
    c.maps.push_back(std::move(m));
  }
  return c;
}

/// A right A-module as a coalgebra over the arity-1 operad of A. The
/// composition of Coend(V) in arity 1 is reversed relative to map
/// composition, which is exactly why a right action (not a left one)
/// induces a morphism.
template <Field F>
CoalgebraOverOperad<F> module_coalgebra(const AlgebraData<F>& a,
                                        const LinearMap<F>& rho) {
  const int v = rho.cod();
  if (rho.dom() != v * a.dim)
    throw std::invalid_argument("module_coalgebra: action must map V (x) A -> V");
  CoalgebraOverOperad<F> c{build_algebra_operad(a), v, {}};
  c.maps.push_back(LinearMap<F>(a.field, 1, 0));
  LinearMap<F> m(a.field, v, a.dim * v);
  for (int j = 0; j < a.dim; ++j)
    for (int cc = 0; cc < v; ++cc)
      for (int r = 0; r < v; ++r)
        m.at(r, j * v + cc) = rho.at(r, cc * a.dim + j);
  c.maps.push_back(std::move(m));
  return c;
}

}  // namespace opcheck
