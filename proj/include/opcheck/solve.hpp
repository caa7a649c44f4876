#pragma once

#include <optional>
#include <vector>

#include "opcheck/linear_map.hpp"

namespace opcheck {

// Gauss-Jordan elimination with transform tracking: row_reduce(M) returns
// R in reduced row echelon form together with an invertible T such that
// T * M = R. Pivoting is deterministic (first nonzero entry scanning rows
// top-down per column), so every derived object below is reproducible.

template <Field F>
struct RowReduction {
  LinearMap<F> rref;
  LinearMap<F> transform;
  std::vector<int> pivot_cols;
  int rank = 0;
};

template <Field F>
RowReduction<F> row_reduce(const LinearMap<F>& m) {
  const F& k = m.field();
  RowReduction<F> out{m, LinearMap<F>::identity(k, m.cod()), {}, 0};
  LinearMap<F>& r = out.rref;
  LinearMap<F>& t = out.transform;
  int row = 0;
  for (int col = 0; col < m.dom() && row < m.cod(); ++col) {
    int piv = -1;
    for (int i = row; i < m.cod(); ++i)
      if (!k.is_zero(r.at(i, col))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row) {
      for (int c = 0; c < r.dom(); ++c) std::swap(r.at(piv, c), r.at(row, c));
      for (int c = 0; c < t.dom(); ++c) std::swap(t.at(piv, c), t.at(row, c));
    }
    const auto s = k.inv(r.at(row, col));
    for (int c = 0; c < r.dom(); ++c) r.at(row, c) = k.mul(s, r.at(row, c));
    for (int c = 0; c < t.dom(); ++c) t.at(row, c) = k.mul(s, t.at(row, c));
    for (int i = 0; i < m.cod(); ++i) {
      if (i == row) continue;
      const auto f = r.at(i, col);
      if (k.is_zero(f)) continue;
      for (int c = 0; c < r.dom(); ++c)
        r.at(i, c) = k.sub(r.at(i, c), k.mul(f, r.at(row, c)));
      for (int c = 0; c < t.dom(); ++c)
        t.at(i, c) = k.sub(t.at(i, c), k.mul(f, t.at(row, c)));
    }
    out.pivot_cols.push_back(col);
    ++row;
  }
  out.rank = row;
  return out;
}

template <Field F>
int rank(const LinearMap<F>& m) {
  return row_reduce(m).rank;
}

template <Field F>
int nullity(const LinearMap<F>& m) {
  return m.dom() - rank(m);
}

template <Field F>
bool is_injective(const LinearMap<F>& m) {
  return rank(m) == m.dom();
}

template <Field F>
bool is_surjective(const LinearMap<F>& m) {
  return rank(m) == m.cod();
}

/// Canonical kernel basis: one vector per free column, with 1 in the free
/// coordinate, 0 in the other free coordinates, and pivot coordinates read
/// off the RREF. Ordered by free column index.
template <Field F>
std::vector<std::vector<typename F::Elt>> kernel_basis(const LinearMap<F>& m) {
  const F& k = m.field();
  RowReduction<F> rr = row_reduce(m);
  std::vector<bool> is_pivot(m.dom(), false);
  for (int c : rr.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<typename F::Elt>> basis;
  for (int free = 0; free < m.dom(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<typename F::Elt> v(m.dom(), k.zero());
    v[free] = k.one();
    for (int i = 0; i < rr.rank; ++i)
      v[rr.pivot_cols[i]] = k.neg(rr.rref.at(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Kernel basis packed as columns of a dom x nullity matrix.
template <Field F>
LinearMap<F> kernel_map(const LinearMap<F>& m) {
  auto basis = kernel_basis(m);
  LinearMap<F> k(m.field(), m.dom(), static_cast<int>(basis.size()));
  for (int c = 0; c < k.dom(); ++c)
    for (int r = 0; r < m.dom(); ++r) k.at(r, c) = basis[c][r];
  return k;
}

/// g with g * m = id_dom, when m is injective. Rows of the tracked
/// transform give it directly: the first dom rows of T satisfy
/// (T m)|_top = id.
template <Field F>
std::optional<LinearMap<F>> left_inverse(const LinearMap<F>& m) {
  RowReduction<F> rr = row_reduce(m);
  if (rr.rank != m.dom()) return std::nullopt;
  LinearMap<F> g(m.field(), m.dom(), m.cod());
  for (int r = 0; r < m.dom(); ++r)
    for (int c = 0; c < m.cod(); ++c) g.at(r, c) = rr.transform.at(r, c);
  return g;
}

/// Solve m * x = b column-wise; free variables are set to zero, so the
/// output is deterministic. Returns nullopt when any column is
/// inconsistent.
template <Field F>
std::optional<LinearMap<F>> solve_matrix(const LinearMap<F>& m,
                                         const LinearMap<F>& b) {
  detail::require_same_field(m, b, "solve_matrix");
  if (m.cod() != b.cod())
    throw std::invalid_argument("solve_matrix: codomain mismatch " +
                                m.shape_string() + " vs " + b.shape_string());
  const F& k = m.field();
  RowReduction<F> rr = row_reduce(m);
  LinearMap<F> tb = compose(rr.transform, b);
  // Rows of rref below the rank are zero; those rows of T*b must vanish.
  for (int r = rr.rank; r < m.cod(); ++r)
    for (int c = 0; c < b.dom(); ++c)
      if (!k.is_zero(tb.at(r, c))) return std::nullopt;
  LinearMap<F> x(k, m.dom(), b.dom());
  for (int i = 0; i < rr.rank; ++i) {
    int piv = rr.pivot_cols[i];
    for (int c = 0; c < b.dom(); ++c) {
      auto v = tb.at(i, c);
      // Subtract free-variable contributions; frees are zero, and later
      // pivot columns of an RREF row are zero, so v is already the value.
      x.at(piv, c) = v;
    }
  }
  return x;
}

template <Field F>
std::optional<LinearMap<F>> right_inverse(const LinearMap<F>& m) {
  return solve_matrix(m, LinearMap<F>::identity(m.field(), m.cod()));
}

// A quotient of K^ambient by a subspace, presented by the canonical
// surjection onto the free coordinates of the row-reduced subspace basis.
template <Field F>
struct Quotient {
  int dim = 0;
  LinearMap<F> map;  // ambient -> dim, surjective, kernel = the subspace
};

/// Quotient of K^ambient by the column span of `span_cols`.
template <Field F>
Quotient<F> quotient_by_subspace(const LinearMap<F>& span_cols) {
  const F& k = span_cols.field();
  const int w = span_cols.cod();
  RowReduction<F> rr = row_reduce(span_cols.transpose());
  std::vector<bool> is_pivot(w, false);
  for (int c : rr.pivot_cols) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < w; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Quotient<F> q{static_cast<int>(free_cols.size()),
                LinearMap<F>(k, static_cast<int>(free_cols.size()), w)};
  // e_c maps to its own class for free c; pivot basis rows get killed, so
  // e_{pivot_i} maps to minus the free part of row i.
  for (int a = 0; a < q.dim; ++a) q.map.at(a, free_cols[a]) = k.one();
  for (int i = 0; i < rr.rank; ++i)
    for (int a = 0; a < q.dim; ++a)
      q.map.at(a, rr.pivot_cols[i]) = k.neg(rr.rref.at(i, free_cols[a]));
  return q;
}

/// Coinvariants of a linear group action given by generator matrices:
/// quotient by the span of (A_g - id) e_j over all generators g and basis
/// vectors e_j. Generators suffice since A_{gh} e - e telescopes.
template <Field F>
Quotient<F> coinvariants(const F& field, int dim,
                         const std::vector<LinearMap<F>>& generators) {
  LinearMap<F> span(field, dim, dim * static_cast<int>(generators.size()));
  int col = 0;
  for (const auto& g : generators) {
    if (g.dom() != dim || g.cod() != dim)
      throw std::invalid_argument("coinvariants: generator is not an endomorphism of the space");
    for (int j = 0; j < dim; ++j, ++col)
      for (int r = 0; r < dim; ++r)
        span.at(r, col) =
            r == j ? field.sub(g.at(r, j), field.one()) : g.at(r, j);
  }
  return quotient_by_subspace(span);
}

}  // namespace opcheck
