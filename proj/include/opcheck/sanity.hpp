#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opcheck/algebra.hpp"
#include "opcheck/coalgebra.hpp"
#include "opcheck/multi_index.hpp"
#include "opcheck/operad.hpp"
#include "opcheck/operad_builders.hpp"
#include "opcheck/solve.hpp"

namespace opcheck {

// Cofree coalgebras over arity-1 operads, the terminal coalgebra P(0)^*,
// the pointed-coalgebra equivalence (point_sum / cokernel_reduction), and
// the counit factorization through the reduced part. Cofree objects are
// constructed only for operads concentrated in arities {0,1}; that is the
// regime where every step below is a finite linear-algebra computation.

namespace detail {

template <Field F>
bool same_operad_data(const TruncatedOperad<F>& a, const TruncatedOperad<F>& b) {
  if (!(a.field == b.field) || a.max_arity != b.max_arity || a.dims != b.dims ||
      a.unit != b.unit || a.action.size() != b.action.size())
    return false;
  for (std::size_t n = 0; n < a.action.size(); ++n) {
    if (a.action[n].size() != b.action[n].size()) return false;
    for (std::size_t k = 0; k < a.action[n].size(); ++k)
      if (!(a.action[n][k] == b.action[n][k])) return false;
  }
  if (a.pcomp.size() != b.pcomp.size()) return false;
  for (const auto& [key, c] : a.pcomp) {
    auto it = b.pcomp.find(key);
    if (it == b.pcomp.end() || !(it->second == c)) return false;
  }
  return true;
}

/// Stack row blocks of equal domain into one matrix.
template <Field F>
LinearMap<F> vstack(const F& field, int dom,
                    const std::vector<LinearMap<F>>& blocks) {
  int rows = 0;
  for (const auto& b : blocks) rows += b.cod();
  LinearMap<F> m(field, rows, dom);
  int at = 0;
  for (const auto& b : blocks) {
    for (int r = 0; r < b.cod(); ++r)
      for (int c = 0; c < dom; ++c) m.at(at + r, c) = b.at(r, c);
    at += b.cod();
  }
  return m;
}

}  // namespace detail

// -- lifts along morphism equations -------------------------------------

template <Field F>
struct LiftSolution {
  bool consistent = false;
  int solution_dim = 0;              // dimension of the solution space
  std::optional<LinearMap<F>> lift;  // canonical solution when consistent
};

/// Solve for g: V -> U subject to the coalgebra-morphism equations of all
/// arities <= linear_arity_cap (these are linear in g; higher arities are
/// not) plus, optionally, counit o g = f. With linear_arity_cap = 1 and an
/// operad concentrated in arities {0,1} the system is the full morphism
/// condition; for higher-arity operads the caller must re-verify the
/// returned lift with check_coalgebra_morphism.
template <Field F>
LiftSolution<F> solve_coalgebra_lift(const CoalgebraOverOperad<F>& cv,
                                     const CoalgebraOverOperad<F>& cu,
                                     int linear_arity_cap,
                                     const std::optional<LinearMap<F>>& counit = {},
                                     const std::optional<LinearMap<F>>& f = {}) {
  const F& k = cu.operad.field;
  const int v = cv.dim, u = cu.dim;
  if (cv.operad.dims != cu.operad.dims)
    throw std::invalid_argument("solve_coalgebra_lift: operad shapes differ");
  if (counit.has_value() != f.has_value())
    throw std::invalid_argument("solve_coalgebra_lift: counit and f come together");
  auto id_v = LinearMap<F>::identity(k, v);
  auto id_u = LinearMap<F>::identity(k, u);
  std::vector<LinearMap<F>> rows, rhs;
  for (int b = 0; b < cv.operad.dims[0]; ++b) {
    rows.push_back(tensor(coalgebra_slice(cu, 0, b), id_v));
    rhs.push_back(vectorize(coalgebra_slice(cv, 0, b)));
  }
  if (linear_arity_cap >= 1 && cv.operad.max_arity >= 1)
    for (int b = 0; b < cv.operad.dims[1]; ++b) {
      auto su = coalgebra_slice(cu, 1, b);
      auto sv = coalgebra_slice(cv, 1, b);
      rows.push_back(sub(tensor(su, id_v), tensor(id_u, sv.transpose())));
      rhs.push_back(LinearMap<F>(k, u * v, 1));
    }
  if (counit) {
    if (counit->dom() != u || f->dom() != v || counit->cod() != f->cod())
      throw std::invalid_argument("solve_coalgebra_lift: counit/f shape mismatch");
    rows.push_back(tensor(*counit, id_v));
    rhs.push_back(vectorize(*f));
  }
  auto m = detail::vstack(k, u * v, rows);
  auto r = detail::vstack(k, 1, rhs);
  auto sol = solve_matrix(m, r);
  LiftSolution<F> out{sol.has_value(), nullity(m), std::nullopt};
  if (sol) out.lift = unvectorize(k, u, v, *sol);
  return out;
}

// -- cofree coalgebras at arity 1 ----------------------------------------

template <Field F>
struct CofreeData {
  AlgebraData<F> algebra;             // A = P(1)
  int x = 0;                          // dim of the cogenerating space X
  CoalgebraOverOperad<F> carrier;     // [A, X] = A^* (x) X over the operad of A
  LinearMap<F> counit;                // evaluation at 1_A : carrier -> X
  std::optional<LinearMap<F>> section;  // filled by counit_split_check
};

/// The cofree coalgebra on X over the arity-1 operad of A: carrier
/// Hom(A, X) with the right translation action (f * a)(c) = f(ac) and
/// counit f -> f(1).
template <Field F>
CofreeData<F> cofree_arity1(const AlgebraData<F>& a, int x) {
  if (!validate_algebra(a).ok())
    throw std::invalid_argument("cofree_arity1: not a unital associative algebra");
  if (x < 0) throw std::invalid_argument("cofree_arity1: negative dimension");
  const F& k = a.field;
  const int v = a.dim * x;
  auto id_x = LinearMap<F>::identity(k, x);
  // Right action on A^* (x) X: f * e_j = (L_j)^T (x) 1 applied to f, with
  // L_j the left multiplication by e_j.
  LinearMap<F> rho(k, v, v * a.dim);
  for (int j = 0; j < a.dim; ++j) {
    LinearMap<F> lj(k, a.dim, a.dim);
    for (int r = 0; r < a.dim; ++r)
      for (int c = 0; c < a.dim; ++c) lj.at(r, c) = a.mult.at(r, j * a.dim + c);
    auto rj = tensor(lj.transpose(), id_x);
    for (int c = 0; c < v; ++c)
      for (int r = 0; r < v; ++r) rho.at(r, c * a.dim + j) = rj.at(r, c);
  }
  CofreeData<F> cf{a, x, module_coalgebra(a, rho),
                   tensor(LinearMap<F>::row(k, a.unit), id_x), std::nullopt};
  return cf;
}

/// Whether the counit splits; on success the section is stored in cf.
template <Field F>
bool counit_split_check(CofreeData<F>& cf) {
  cf.section = solve_matrix(
      cf.counit, LinearMap<F>::identity(cf.algebra.field, cf.x));
  return cf.section.has_value();
}

/// Couniversality of the cofree carrier: every map f: V -> X from a valid
/// coalgebra V over the same arity-1 operad lifts to exactly one coalgebra
/// morphism g with counit o g = f.
template <Field F>
CheckReport verify_couniversal(
    const CofreeData<F>& cf,
    const std::vector<std::pair<CoalgebraOverOperad<F>, LinearMap<F>>>& tests) {
  CheckReport report;
  for (std::size_t t = 0; t < tests.size(); ++t) {
    const auto& [cv, f] = tests[t];
    if (!check_coalgebra(cv).ok())
      throw std::invalid_argument("verify_couniversal: invalid test coalgebra");
    if (f.dom() != cv.dim || f.cod() != cf.x)
      throw std::invalid_argument("verify_couniversal: test map has wrong shape");
    auto sol = solve_coalgebra_lift(cv, cf.carrier, 1,
                                    std::optional<LinearMap<F>>(cf.counit),
                                    std::optional<LinearMap<F>>(f));
    if (!sol.consistent) {
      report.fail("couniversal-missing", {{"test", static_cast<long>(t)}});
      continue;
    }
    if (sol.solution_dim != 0)
      report.fail("couniversal-ambiguous",
                  {{"test", static_cast<long>(t)},
                   {"solutions", static_cast<long>(sol.solution_dim)}});
    auto mrep = check_coalgebra_morphism(cv, cf.carrier, *sol.lift);
    if (!mrep.ok())
      report.fail("couniversal-lift-invalid", {{"test", static_cast<long>(t)}});
    if (!(compose(cf.counit, *sol.lift) == f))
      report.fail("couniversal-counit", {{"test", static_cast<long>(t)}});
  }
  return report;
}

/// Propagation along an algebra morphism phi: A -> A': the restriction
/// Hom(A', X) -> Hom(A, X) closes the counit triangle, so surjectivity of
/// the composite forces surjectivity of the A-side counit.
template <Field F>
CheckReport propagation_check(const AlgebraData<F>& a, const AlgebraData<F>& a2,
                              const LinearMap<F>& phi, int x) {
  const F& k = a.field;
  if (phi.dom() != a.dim || phi.cod() != a2.dim)
    throw std::invalid_argument("propagation_check: phi must map A -> A'");
  if (!(compose(phi, a.unit_map()) == a2.unit_map()) ||
      !(compose(phi, a.mult) == compose(a2.mult, tensor(phi, phi))))
    throw std::invalid_argument("propagation_check: phi is not a unital algebra morphism");
  CheckReport report;
  auto cfa = cofree_arity1(a, x);
  auto cfa2 = cofree_arity1(a2, x);
  auto res = tensor(phi.transpose(), LinearMap<F>::identity(k, x));
  detail::fail_with_witness(report, compose(cfa.counit, res), cfa2.counit,
                            "propagation-triangle", {});
  if (is_surjective(compose(cfa.counit, res)) && !is_surjective(cfa.counit))
    report.fail("propagation-epi", {},
                "composite epi but the second map is not");
  return report;
}

// -- the terminal coalgebra P(0)^* ---------------------------------------

/// Fill the top q slots of P(n) with arity-0 inputs: the composite
/// P(n) (x) P(0)^(x)q -> P(n-q) sending x (x) w_1 .. w_q to
/// x(.., .., w_1, .., w_q), factor t landing in slot n-q+t-1. Slots are
/// consumed highest first; the factors are pre-reversed so the adjacent
/// one always fills the highest pending slot.
template <Field F>
LinearMap<F> fill_top_slots(const TruncatedOperad<F>& p, int n, int q) {
  if (q < 0 || q > n || n > p.max_arity)
    throw std::invalid_argument("fill_top_slots: bad slot count");
  const F& k = p.field;
  const int w = p.dims[0];
  std::vector<int> rev(q);
  for (int t = 0; t < q; ++t) rev[t] = q - 1 - t;
  LinearMap<F> cur = tensor(LinearMap<F>::identity(k, p.dims[n]),
                            perm_on_tensor_power(k, Permutation(rev), w));
  for (int j = n; j > n - q; --j) {
    auto rest = LinearMap<F>::identity(
        k, static_cast<int>(detail::ipow(w, j - 1 - (n - q))));
    cur = compose(tensor(p.comp(j, 0, j - 1), rest), cur);
  }
  return cur;
}

/// alpha_n : P(n) (x) W^(x)n -> W, the initial-algebra structure on
/// W = P(0) given by operadic composition.
template <Field F>
LinearMap<F> initial_algebra_map(const TruncatedOperad<F>& p, int n) {
  return fill_top_slots(p, n, n);
}

namespace detail {

/// Terminal structure on W^* without the dims[0] >= 1 guard (the zero
/// space carries it vacuously, which point_sum needs).
template <Field F>
CoalgebraOverOperad<F> terminal_structure(const TruncatedOperad<F>& p) {
  const F& k = p.field;
  const int w = p.dims[0];
  CoalgebraOverOperad<F> c{p, w, {}};
  for (int n = 0; n <= p.max_arity; ++n) {
    auto alpha = initial_algebra_map(p, n);
    const long wn = ipow(w, n);
    LinearMap<F> rho(k, static_cast<int>(wn), p.dims[n] * w);
    // Dualize each End(W) slice into a Coend(W^*) slice by transposing
    // matrix units.
    for (int b = 0; b < p.dims[n]; ++b)
      for (int r = 0; r < w; ++r)
        for (long j = 0; j < wn; ++j)
          rho.at(static_cast<int>(j), b * w + r) =
              alpha.at(r, static_cast<int>(b * wn + j));
    c.maps.push_back(std::move(rho));
  }
  return c;
}

}  // namespace detail

/// The terminal P-coalgebra: W^* with the dual of the initial-algebra
/// structure on W = P(0).
template <Field F>
CoalgebraOverOperad<F> terminal_coalgebra(const TruncatedOperad<F>& p) {
  if (p.dims.empty() || p.dims[0] < 1)
    throw std::invalid_argument("terminal_coalgebra: P(0) must be nonzero");
  return detail::terminal_structure(p);
}

/// The unique candidate morphism V -> W^* into the terminal coalgebra:
/// the arity-0 structure of V against the perfect arity-0 pairing of W^*
/// determines it entirely.
template <Field F>
LinearMap<F> terminal_morphism(const CoalgebraOverOperad<F>& cv) {
  const F& k = cv.operad.field;
  const int w = cv.operad.dims[0], v = cv.dim;
  LinearMap<F> f(k, w, v);
  for (int b = 0; b < w; ++b)
    for (int c = 0; c < v; ++c) f.at(b, c) = cv.maps[0].at(0, b * v + c);
  return f;
}

/// Terminality on an instance: the arity-0 linear system pins exactly one
/// candidate (solution-space dimension zero), the direct formula agrees,
/// and the candidate is a full coalgebra morphism.
template <Field F>
CheckReport terminality_check(const CoalgebraOverOperad<F>& cv) {
  CheckReport report;
  auto t = terminal_coalgebra(cv.operad);
  auto sol = solve_coalgebra_lift(cv, t, 0);
  if (!sol.consistent) {
    report.fail("terminality-missing", {});
    return report;
  }
  if (sol.solution_dim != 0)
    report.fail("terminality-ambiguous", {{"solutions", sol.solution_dim}});
  if (!(*sol.lift == terminal_morphism(cv)))
    report.fail("terminality-formula", {});
  report.merge(check_coalgebra_morphism(cv, t, *sol.lift));
  return report;
}

// -- pointed coalgebras and the equivalence -------------------------------

template <Field F>
struct PointedCoalgebra {
  CoalgebraOverOperad<F> base;
  LinearMap<F> pointing;  // P(0)^* -> V
};

/// A pointing must be a coalgebra morphism from the terminal structure.
template <Field F>
CheckReport check_pointed(const PointedCoalgebra<F>& pc) {
  CheckReport report;
  const auto& p = pc.base.operad;
  if (pc.pointing.dom() != p.dims[0] || pc.pointing.cod() != pc.base.dim) {
    report.fail("pointing-shape", {}, "got " + pc.pointing.shape_string());
    return report;
  }
  report.merge(check_coalgebra(pc.base));
  if (!report.ok()) return report;
  report.merge(
      check_coalgebra_morphism(detail::terminal_structure(p), pc.base,
                               pc.pointing));
  return report;
}

/// Pointed structure on V-bar (+) P(0)^*: the terminal structure on the
/// P(0)^* summand; on V-bar the sum over p + q = n (p >= 1, zero for
/// p = 0) of
///
///   coevaluation of (P(0), P(0)^*) inserted q times, the top q slots
///   filled, V-bar's reduced structure on the rest,
///
/// distributed over the (p,q)-shuffles. The pointing is the inclusion of
/// the second summand.
template <Field F>
PointedCoalgebra<F> point_sum(const CoalgebraOverOperad<F>& vbar,
                              const TruncatedOperad<F>& p) {
  if (p.max_arity > 3)
    throw budget_error("point_sum: arity guard (max_arity <= 3)");
  if (!detail::same_operad_data(vbar.operad, reduced_part(p)))
    throw std::invalid_argument("point_sum: structure is not over the reduced part");
  if (!check_coalgebra(vbar).ok())
    throw std::invalid_argument("point_sum: reduced structure is invalid");
  const F& k = p.field;
  const int v = vbar.dim, w = p.dims[0], u = v + w;
  LinearMap<F> iota_v(k, u, v), iota_w(k, u, w);
  for (int i = 0; i < v; ++i) iota_v.at(i, i) = k.one();
  for (int i = 0; i < w; ++i) iota_w.at(v + i, i) = k.one();
  auto terminal = detail::terminal_structure(p);

  CoalgebraOverOperad<F> c{p, u, {}};
  for (int n = 0; n <= p.max_arity; ++n) {
    const long un = detail::ipow(u, n);
    if (un * p.dims[n] * u > kCoalgebraEntryBudget)
      throw budget_error("point_sum: output tensor power exceeds budget");
    // Restriction to the P(0)^* summand: terminal structure, included.
    auto r_w = compose(tensor_power(iota_w, n), terminal.maps[n]);
    // Restriction to V-bar: shuffle-distributed (p,q) pieces.
    LinearMap<F> r_v(k, static_cast<int>(un), p.dims[n] * v);
    for (int pp = 1; pp <= n; ++pp) {
      const int q = n - pp;
      const long wq = detail::ipow(w, q);
      LinearMap<F> eta(k, static_cast<int>(wq * wq), 1);
      for (long a = 0; a < wq; ++a)
        eta.at(static_cast<int>(a * wq + a), 0) = k.one();
      auto x1 = tensor(LinearMap<F>::identity(k, p.dims[n]),
                       tensor(eta, LinearMap<F>::identity(k, v)));
      auto x2 = tensor(LinearMap<F>::identity(k, static_cast<int>(p.dims[n] * wq)),
                       swap_factors(k, static_cast<int>(wq), v));
      auto x3 = tensor(fill_top_slots(p, n, q),
                       LinearMap<F>::identity(k, static_cast<int>(v * wq)));
      auto x4 = tensor(vbar.maps[pp],
                       LinearMap<F>::identity(k, static_cast<int>(wq)));
      auto piece = compose(x4, compose(x3, compose(x2, x1)));
      auto incl = tensor(tensor_power(iota_v, pp), tensor_power(iota_w, q));
      // Each shuffle fills the slots it routes to the P(0)^* positions,
      // not the top ones: twist by s^{-1} first, so those slots are on
      // top when the filler runs.
      for (const auto& s : shuffles(pp, q)) {
        auto twist =
            tensor(p.act(n, s.inverse()), LinearMap<F>::identity(k, v));
        r_v = add(r_v, compose(perm_on_tensor_power(k, s, u),
                               compose(incl, compose(piece, twist))));
      }
    }
    LinearMap<F> m(k, static_cast<int>(un), p.dims[n] * u);
    for (int b = 0; b < p.dims[n]; ++b)
      for (int r = 0; r < un; ++r) {
        for (int cc = 0; cc < v; ++cc)
          m.at(r, b * u + cc) = r_v.at(r, b * v + cc);
        for (int cc = 0; cc < w; ++cc)
          m.at(r, b * u + v + cc) = r_w.at(r, b * w + cc);
      }
    c.maps.push_back(std::move(m));
  }
  return PointedCoalgebra<F>{std::move(c), std::move(iota_w)};
}

template <Field F>
struct CokernelReduction {
  CheckReport report;
  std::optional<CoalgebraOverOperad<F>> reduced;  // over reduced_part(P)
  std::optional<LinearMap<F>> quotient;           // V -> V-bar
  std::optional<LinearMap<F>> section;            // V-bar -> V, quotient o section = 1
};

/// Quotient a pointed coalgebra by the image of its pointing. The induced
/// maps are computed through an arbitrary linear section; when the
/// pointing is a coalgebra morphism the result does not depend on the
/// choice, since the quotient power kills every image factor.
template <Field F>
CokernelReduction<F> cokernel_reduction(const PointedCoalgebra<F>& pc) {
  CokernelReduction<F> out;
  const auto& p = pc.base.operad;
  const F& k = p.field;
  const int u = pc.base.dim, w = p.dims[0];
  if (pc.pointing.cod() != u || pc.pointing.dom() != w) {
    out.report.fail("cokernel-shape", {}, "got " + pc.pointing.shape_string());
    return out;
  }
  if (rank(pc.pointing) != w) {
    out.report.fail("cokernel-pointing", {}, "pointing is not injective");
    return out;
  }
  auto q = quotient_by_subspace(pc.pointing);
  auto s = solve_matrix(q.map, LinearMap<F>::identity(k, q.dim));
  CoalgebraOverOperad<F> red{reduced_part(p), q.dim, {}};
  red.maps.push_back(LinearMap<F>(k, 1, 0));
  for (int n = 1; n <= p.max_arity; ++n)
    red.maps.push_back(
        compose(tensor_power(q.map, n),
                compose(pc.base.maps[n],
                        tensor(LinearMap<F>::identity(k, p.dims[n]), *s))));
  out.reduced = std::move(red);
  out.quotient = q.map;
  out.section = *s;
  return out;
}

/// The comparison V -> V-bar (+) P(0)^* of the equivalence: quotient onto
/// the first summand, the terminal morphism onto the second.
template <Field F>
LinearMap<F> pointed_equivalence_iso(const PointedCoalgebra<F>& pc,
                                     const CokernelReduction<F>& red) {
  if (!red.quotient)
    throw std::invalid_argument("pointed_equivalence_iso: reduction did not run");
  const F& k = pc.base.operad.field;
  return detail::vstack(k, pc.base.dim,
                        {*red.quotient, terminal_morphism(pc.base)});
}

// -- the composed counit over arity-{0,1} operads -------------------------

template <Field F>
struct ComposedCounit {
  CheckReport report;
  PointedCoalgebra<F> g_px;     // point_sum of the cofree carrier
  LinearMap<F> projection;      // G_P X -> G_Pbar X (kill the P(0)^* block)
  LinearMap<F> reduced_counit;  // G_Pbar X -> X (cofree evaluation)
  LinearMap<F> counit;          // the composite G_P X -> X
};

/// The factorization G_P X -> G_Pbar X -> X for an operad concentrated in
/// arities {0,1}: both maps epi, and the composite is couniversal for
/// maps out of P-coalgebras (checked on the carrier itself and on the
/// terminal coalgebra).
template <Field F>
ComposedCounit<F> composed_counit_check(const TruncatedOperad<F>& p, int x) {
  if (p.max_arity != 1)
    throw std::invalid_argument("composed_counit_check: operad must be concentrated in arities {0,1}");
  const F& k = p.field;
  AlgebraData<F> a{k, p.dims[1], p.comp(1, 1, 0), p.unit};
  auto cf = cofree_arity1(a, x);
  // The cofree carrier lives over the arity-1 operad of A, which must be
  // the reduced part of P for the pointed sum to apply.
  auto pointed = point_sum(cf.carrier, p);
  const int v = cf.carrier.dim, u = pointed.base.dim;
  LinearMap<F> pr(k, v, u);
  for (int i = 0; i < v; ++i) pr.at(i, i) = k.one();
  ComposedCounit<F> out{{}, std::move(pointed), std::move(pr), cf.counit,
                        LinearMap<F>(k, x, u)};
  out.counit = compose(out.reduced_counit, out.projection);
  if (!is_surjective(out.projection))
    out.report.fail("composed-first-epi", {});
  if (!is_surjective(out.reduced_counit))
    out.report.fail("composed-second-epi", {});
  if (!is_surjective(out.counit)) out.report.fail("composed-total-epi", {});

  // Couniversality instances: the carrier against its own counit (lift
  // must be the identity), and the terminal coalgebra against the counit
  // restricted through its pointing (lift must be the pointing).
  auto sol = solve_coalgebra_lift(out.g_px.base, out.g_px.base, 1,
                                  std::optional<LinearMap<F>>(out.counit),
                                  std::optional<LinearMap<F>>(out.counit));
  if (!sol.consistent || sol.solution_dim != 0 ||
      !(*sol.lift == LinearMap<F>::identity(k, u)))
    out.report.fail("composed-couniversal", {{"test", 0}},
                    "identity lift against the composed counit");
  if (p.dims[0] >= 1) {
    auto t = terminal_coalgebra(p);
    auto sol2 = solve_coalgebra_lift(
        t, out.g_px.base, 1,
        std::optional<LinearMap<F>>(out.counit),
        std::optional<LinearMap<F>>(compose(out.counit, out.g_px.pointing)));
    if (!sol2.consistent || sol2.solution_dim != 0 ||
        !(*sol2.lift == out.g_px.pointing))
      out.report.fail("composed-couniversal", {{"test", 1}},
                      "pointing lift from the terminal coalgebra");
  }
  return out;
}

}  // namespace opcheck
