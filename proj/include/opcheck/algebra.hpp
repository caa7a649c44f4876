#pragma once

#include <vector>

#include "opcheck/check_report.hpp"
#include "opcheck/linear_map.hpp"

namespace opcheck {

// A finite-dimensional unital associative algebra, given by its
// multiplication matrix A (x) A -> A and unit element.

template <Field F>
struct AlgebraData {
  using Elt = typename F::Elt;

  F field;
  int dim = 0;
  LinearMap<F> mult;       // dim x dim^2
  std::vector<Elt> unit;   // length dim

  LinearMap<F> unit_map() const { return LinearMap<F>::column(field, unit); }
};

template <Field F>
CheckReport validate_algebra(const AlgebraData<F>& a) {
  CheckReport report;
  const F& k = a.field;
  if (a.dim < 0 || a.mult.cod() != a.dim || a.mult.dom() != a.dim * a.dim ||
      static_cast<int>(a.unit.size()) != a.dim) {
    report.fail("algebra-shape");
    return report;
  }
  auto id = LinearMap<F>::identity(k, a.dim);
  if (!(compose(a.mult, tensor(a.mult, id)) ==
        compose(a.mult, tensor(id, a.mult))))
    report.fail("algebra-associative");
  auto u = a.unit_map();
  if (!(compose(a.mult, tensor(u, id)) == id))
    report.fail("algebra-left-unit");
  if (!(compose(a.mult, tensor(id, u)) == id))
    report.fail("algebra-right-unit");
  return report;
}

/// The ground field as a one-dimensional algebra.
template <Field F>
AlgebraData<F> scalar_algebra(const F& field) {
  AlgebraData<F> a{field, 1, LinearMap<F>(field, 1, 1), {field.one()}};
  a.mult.at(0, 0) = field.one();
  return a;
}

/// K[x]/(x^2), basis (1, x).
template <Field F>
AlgebraData<F> dual_numbers(const F& field) {
  AlgebraData<F> a{field, 2, LinearMap<F>(field, 2, 4),
                   {field.one(), field.zero()}};
  a.mult.at(0, 0) = field.one();  // 1*1 = 1
  a.mult.at(1, 1) = field.one();  // 1*x = x
  a.mult.at(1, 2) = field.one();  // x*1 = x
  return a;
}

/// Group algebra K[Z/2], basis (e, g) with g^2 = e.
template <Field F>
AlgebraData<F> group_algebra_c2(const F& field) {
  AlgebraData<F> a{field, 2, LinearMap<F>(field, 2, 4),
                   {field.one(), field.zero()}};
  a.mult.at(0, 0) = field.one();
  a.mult.at(1, 1) = field.one();
  a.mult.at(1, 2) = field.one();
  a.mult.at(0, 3) = field.one();
  return a;
}

/// 2x2 matrices, basis (E11, E12, E21, E22): Eab * Ecd = [b==c] Ead.
template <Field F>
AlgebraData<F> mat2_algebra(const F& field) {
  AlgebraData<F> a{field, 4, LinearMap<F>(field, 4, 16),
                   {field.one(), field.zero(), field.zero(), field.one()}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l) {
        int left = i * 2 + j, right = j * 2 + l, out = i * 2 + l;
        a.mult.at(out, left * 4 + right) = field.one();
      }
  return a;
}

}  // namespace opcheck
