#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opcheck/field.hpp"

namespace opcheck {

// Dense matrix over an exact field, read as a linear map K^dom -> K^cod.
// Entries are row-major; dimension-0 domains and codomains are ordinary
// values (unique map to/from the zero space), not errors.
//
// Tensor products of spaces are ordered big-endian: the composite index of
// (i_1, .., i_n) with i_k in [0, d_k) is i_1 * d_2..d_n + ... + i_n. This
// convention is fixed here once and everything downstream (Kronecker
// products, operad compositions, vectorization) relies on it.

template <Field F>
class LinearMap {
 public:
  using Elt = typename F::Elt;

  LinearMap(const F& field, int cod, int dom)
      : field_(field), cod_(cod), dom_(dom), entries_() {
    if (cod < 0 || dom < 0)
      throw std::invalid_argument("LinearMap: negative dimension");
    entries_.assign(static_cast<std::size_t>(cod) * dom, field.zero());
  }

  LinearMap(const F& field, int cod, int dom, std::vector<Elt> entries)
      : field_(field), cod_(cod), dom_(dom), entries_(std::move(entries)) {
    if (cod < 0 || dom < 0)
      throw std::invalid_argument("LinearMap: negative dimension");
    if (entries_.size() != static_cast<std::size_t>(cod) * dom)
      throw std::invalid_argument("LinearMap: entry count does not match shape");
  }

  static LinearMap identity(const F& field, int n) {
    LinearMap m(field, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = field.one();
    return m;
  }

  static LinearMap zero(const F& field, int cod, int dom) {
    return LinearMap(field, cod, dom);
  }

  /// Column vector K -> K^n.
  static LinearMap column(const F& field, std::vector<Elt> v) {
    int n = static_cast<int>(v.size());
    return LinearMap(field, n, 1, std::move(v));
  }

  /// Row functional K^n -> K.
  static LinearMap row(const F& field, std::vector<Elt> v) {
    int n = static_cast<int>(v.size());
    return LinearMap(field, 1, n, std::move(v));
  }

  const F& field() const { return field_; }
  int dom() const { return dom_; }
  int cod() const { return cod_; }

  Elt& at(int r, int c) { return entries_[index(r, c)]; }
  const Elt& at(int r, int c) const { return entries_[index(r, c)]; }

  const std::vector<Elt>& entries() const { return entries_; }

  std::vector<Elt> column_vec(int c) const {
    std::vector<Elt> v;
    v.reserve(cod_);
    for (int r = 0; r < cod_; ++r) v.push_back(at(r, c));
    return v;
  }

  bool is_zero() const {
    for (const Elt& e : entries_)
      if (!field_.is_zero(e)) return false;
    return true;
  }

  bool same_shape(const LinearMap& o) const {
    return dom_ == o.dom_ && cod_ == o.cod_;
  }

  friend bool operator==(const LinearMap& a, const LinearMap& b) {
    return a.field_ == b.field_ && a.same_shape(b) && a.entries_ == b.entries_;
  }

  LinearMap transpose() const {
    LinearMap t(field_, dom_, cod_);
    for (int r = 0; r < cod_; ++r)
      for (int c = 0; c < dom_; ++c) t.at(c, r) = at(r, c);
    return t;
  }

  std::string shape_string() const {
    return std::to_string(cod_) + "x" + std::to_string(dom_);
  }

 private:
  std::size_t index(int r, int c) const {
    if (r < 0 || r >= cod_ || c < 0 || c >= dom_)
      throw std::out_of_range("LinearMap: index (" + std::to_string(r) + "," +
                              std::to_string(c) + ") outside " + shape_string());
    return static_cast<std::size_t>(r) * dom_ + c;
  }

  F field_;
  int cod_;
  int dom_;
  std::vector<Elt> entries_;
};

namespace detail {
template <Field F>
void require_same_field(const LinearMap<F>& a, const LinearMap<F>& b,
                        const char* op) {
  if (!(a.field() == b.field()))
    throw std::invalid_argument(std::string(op) + ": field mismatch (" +
                                a.field().name() + " vs " + b.field().name() + ")");
}
}  // namespace detail

/// f after g (matrix product f * g). Skips zero entries of f, which keeps
/// composition with the very sparse structure matrices cheap.
template <Field F>
LinearMap<F> compose(const LinearMap<F>& f, const LinearMap<F>& g) {
  detail::require_same_field(f, g, "compose");
  if (f.dom() != g.cod())
    throw std::invalid_argument("compose: shape mismatch " + f.shape_string() +
                                " * " + g.shape_string());
  const F& k = f.field();
  LinearMap<F> h(k, f.cod(), g.dom());
  for (int r = 0; r < f.cod(); ++r)
    for (int m = 0; m < f.dom(); ++m) {
      const auto& frm = f.at(r, m);
      if (k.is_zero(frm)) continue;
      for (int c = 0; c < g.dom(); ++c) {
        const auto& gmc = g.at(m, c);
        if (k.is_zero(gmc)) continue;
        h.at(r, c) = k.add(h.at(r, c), k.mul(frm, gmc));
      }
    }
  return h;
}

template <Field F>
LinearMap<F> add(const LinearMap<F>& a, const LinearMap<F>& b) {
  detail::require_same_field(a, b, "add");
  if (!a.same_shape(b))
    throw std::invalid_argument("add: shape mismatch " + a.shape_string() +
                                " vs " + b.shape_string());
  LinearMap<F> s = a;
  for (int r = 0; r < a.cod(); ++r)
    for (int c = 0; c < a.dom(); ++c)
      s.at(r, c) = a.field().add(a.at(r, c), b.at(r, c));
  return s;
}

template <Field F>
LinearMap<F> sub(const LinearMap<F>& a, const LinearMap<F>& b) {
  detail::require_same_field(a, b, "sub");
  if (!a.same_shape(b))
    throw std::invalid_argument("sub: shape mismatch " + a.shape_string() +
                                " vs " + b.shape_string());
  LinearMap<F> s = a;
  for (int r = 0; r < a.cod(); ++r)
    for (int c = 0; c < a.dom(); ++c)
      s.at(r, c) = a.field().sub(a.at(r, c), b.at(r, c));
  return s;
}

template <Field F>
LinearMap<F> scale(const typename F::Elt& c, const LinearMap<F>& a) {
  LinearMap<F> s = a;
  for (int r = 0; r < a.cod(); ++r)
    for (int j = 0; j < a.dom(); ++j) s.at(r, j) = a.field().mul(c, a.at(r, j));
  return s;
}

/// Kronecker product in the big-endian index convention: block (r1, c1)
/// of the result is f(r1, c1) * g.
template <Field F>
LinearMap<F> tensor(const LinearMap<F>& f, const LinearMap<F>& g) {
  detail::require_same_field(f, g, "tensor");
  const F& k = f.field();
  LinearMap<F> t(k, f.cod() * g.cod(), f.dom() * g.dom());
  for (int r1 = 0; r1 < f.cod(); ++r1)
    for (int c1 = 0; c1 < f.dom(); ++c1) {
      const auto& e1 = f.at(r1, c1);
      if (k.is_zero(e1)) continue;
      for (int r2 = 0; r2 < g.cod(); ++r2)
        for (int c2 = 0; c2 < g.dom(); ++c2) {
          const auto& e2 = g.at(r2, c2);
          if (k.is_zero(e2)) continue;
          t.at(r1 * g.cod() + r2, c1 * g.dom() + c2) = k.mul(e1, e2);
        }
    }
  return t;
}

template <Field F>
LinearMap<F> tensor_power(const LinearMap<F>& f, int n) {
  if (n < 0) throw std::invalid_argument("tensor_power: negative exponent");
  LinearMap<F> t = LinearMap<F>::identity(f.field(), 1);
  for (int i = 0; i < n; ++i) t = tensor(t, f);
  return t;
}

/// Block diagonal sum: K^{a+c} <- K^{b+d} with f in the top-left block.
template <Field F>
LinearMap<F> direct_sum(const LinearMap<F>& f, const LinearMap<F>& g) {
  detail::require_same_field(f, g, "direct_sum");
  LinearMap<F> s(f.field(), f.cod() + g.cod(), f.dom() + g.dom());
  for (int r = 0; r < f.cod(); ++r)
    for (int c = 0; c < f.dom(); ++c) s.at(r, c) = f.at(r, c);
  for (int r = 0; r < g.cod(); ++r)
    for (int c = 0; c < g.dom(); ++c)
      s.at(f.cod() + r, f.dom() + c) = g.at(r, c);
  return s;
}

/// The coordinate swap K^a (x) K^b -> K^b (x) K^a.
template <Field F>
LinearMap<F> swap_factors(const F& field, int a, int b) {
  LinearMap<F> s(field, a * b, a * b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) s.at(j * a + i, i * b + j) = field.one();
  return s;
}

/// vec(G) for G: K^dom -> K^cod, row-major: vec index r * dom + c.
template <Field F>
LinearMap<F> vectorize(const LinearMap<F>& g) {
  return LinearMap<F>(g.field(), g.cod() * g.dom(), 1, g.entries());
}

template <Field F>
LinearMap<F> unvectorize(const F& field, int cod, int dom,
                         const LinearMap<F>& v) {
  if (v.dom() != 1 || v.cod() != cod * dom)
    throw std::invalid_argument("unvectorize: shape mismatch");
  return LinearMap<F>(field, cod, dom, v.entries());
}

}  // namespace opcheck
