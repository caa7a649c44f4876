#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "opcheck/algebra.hpp"
#include "opcheck/check_report.hpp"
#include "opcheck/multi_index.hpp"
#include "opcheck/presentation.hpp"
#include "opcheck/solve.hpp"

namespace opcheck {

// The truncated insertion operad Ins_m: the unital associative operad
// (multiplication mu, unit v0) extended by nullary generators v1..vm and,
// for each chosen nonzero lambda in K^{m+1}, a unary generator inv_k
// subject to
//
//   sum_n lambda_n * mu(v_n, inv_k(x1)) = x1.
//
// On a candidate coalgebra (delta, eps_0..eps_m) the relation evaluates to
// I_lambda o sigma_lambda = id with sigma_lambda = ((sum lambda_n eps_n)
// (x) id) o delta, so a valid structure forces every sigma_lambda to be
// invertible. The algebra model is the field extension F_{p^(m+1)} with
// v_n the class of t^n.

template <Field F>
struct InsPresentation {
  int m = 0;
  std::vector<std::vector<typename F::Elt>> lambdas;
  OperadPresentation<F> presentation;
};

template <Field F>
std::string lambda_string(const F& field,
                          const std::vector<typename F::Elt>& lambda) {
  std::string s;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i) s += ",";
    s += field.to_string(lambda[i]);
  }
  return s;
}

template <Field F>
InsPresentation<F> build_ins_presentation(
    const F& field, int m,
    const std::vector<std::vector<typename F::Elt>>& lambdas) {
  if (m < 0) throw std::invalid_argument("build_ins_presentation: m < 0");
  InsPresentation<F> ins{m, lambdas, {field, {}, {}}};
  auto& pres = ins.presentation;
  pres.generators.push_back({"mu", 2});
  for (int n = 0; n <= m; ++n)
    pres.generators.push_back({"v" + std::to_string(n), 0});
  pres.relations.push_back(parse_relation(
      field, "(mu (mu x1 x2) x3) = (mu x1 (mu x2 x3))", "assoc"));
  pres.relations.push_back(parse_relation(field, "(mu (v0) x1) = x1", "unit-left"));
  pres.relations.push_back(parse_relation(field, "(mu x1 (v0)) = x1", "unit-right"));
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const auto& lambda = lambdas[k];
    if (static_cast<int>(lambda.size()) != m + 1)
      throw std::invalid_argument("build_ins_presentation: lambda length must be m+1");
    std::string gen = "inv" + std::to_string(k);
    pres.generators.push_back({gen, 1});
    Relation<F> rel;
    rel.label = "inverse[" + lambda_string(field, lambda) + "]";
    bool nonzero = false;
    for (int n = 0; n <= m; ++n) {
      if (field.is_zero(lambda[n])) continue;
      nonzero = true;
      rel.lhs.terms.emplace_back(
          lambda[n],
          Tree::node("mu", {Tree::node("v" + std::to_string(n), {}),
                            Tree::node(gen, {Tree::leaf(0)})}));
    }
    if (!nonzero)
      throw std::invalid_argument("build_ins_presentation: zero lambda supplied");
    rel.rhs.terms.emplace_back(field.one(), Tree::leaf(0));
    pres.relations.push_back(std::move(rel));
  }
  return ins;
}

/// All nonzero vectors of F_p^{m+1} in lexicographic order.
inline std::vector<std::vector<std::uint32_t>> all_nonzero_lambdas(
    const PrimeField& field, int m) {
  const long p = field.modulus();
  long total = 1;
  for (int i = 0; i <= m; ++i) {
    total *= p;
    if (total > (1L << 22))
      throw budget_error("all_nonzero_lambdas: p^(m+1) too large");
  }
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(total - 1);
  for (long idx = 1; idx < total; ++idx) {
    auto digits = detail::to_digits(idx, static_cast<int>(p), m + 1);
    out.emplace_back(digits.begin(), digits.end());
  }
  return out;
}

// -- polynomial arithmetic over F_p (for the modulus search) -----------

namespace fppoly {

// Dense coefficient vectors, little-endian (coeff of t^k at index k),
// normalized to no trailing zeros.

inline void normalize(std::vector<std::uint32_t>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<std::uint32_t> mul(const PrimeField& f,
                                      const std::vector<std::uint32_t>& a,
                                      const std::vector<std::uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint32_t> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = f.add(c[i + j], f.mul(a[i], b[j]));
  normalize(c);
  return c;
}

inline std::vector<std::uint32_t> rem(const PrimeField& f,
                                      std::vector<std::uint32_t> a,
                                      const std::vector<std::uint32_t>& b) {
  normalize(a);
  while (a.size() >= b.size() && !a.empty()) {
    std::uint32_t q = f.mul(a.back(), f.inv(b.back()));
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = f.sub(a[shift + i], f.mul(q, b[i]));
    normalize(a);
  }
  return a;
}

inline bool is_irreducible(const PrimeField& f,
                           const std::vector<std::uint32_t>& poly) {
  const int deg = static_cast<int>(poly.size()) - 1;
  if (deg < 1) return false;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (int dd = 1; 2 * dd <= deg; ++dd) {
    long count = detail::ipow(static_cast<int>(f.modulus()), dd);
    for (long idx = 0; idx < count; ++idx) {
      std::vector<std::uint32_t> div(dd + 1, 0);
      long v = idx;
      for (int i = 0; i < dd; ++i) {
        div[i] = static_cast<std::uint32_t>(v % f.modulus());
        v /= f.modulus();
      }
      div[dd] = 1;
      if (rem(f, poly, div).empty()) return false;
    }
  }
  return true;
}

/// Smallest monic irreducible of the given degree, ordering coefficient
/// tuples (c_{deg-1}, .., c_0) as base-p numbers. Deterministic.
inline std::vector<std::uint32_t> find_irreducible(const PrimeField& f, int deg) {
  const long total = detail::ipow(static_cast<int>(f.modulus()), deg);
  for (long idx = 0; idx < total; ++idx) {
    std::vector<std::uint32_t> poly(deg + 1, 0);
    long v = idx;
    for (int i = 0; i < deg; ++i) {
      poly[i] = static_cast<std::uint32_t>(v % f.modulus());
      v /= f.modulus();
    }
    poly[deg] = 1;
    if (is_irreducible(f, poly)) return poly;
  }
  throw std::logic_error("find_irreducible: none found (impossible for prime p)");
}

}  // namespace fppoly

// -- the field-extension model ------------------------------------------

struct InsAlgebraModel {
  std::uint32_t p = 2;
  int m = 0;
  std::vector<std::uint32_t> modulus;  // monic, degree m+1, little-endian
  AlgebraData<PrimeField> carrier;
  std::vector<std::vector<std::uint32_t>> lambdas;  // all nonzero, lex order

  int dim() const { return m + 1; }

  /// Multiplication by the element with coordinate vector s.
  LinearMap<PrimeField> mult_by(const std::vector<std::uint32_t>& s) const {
    const PrimeField& f = carrier.field;
    LinearMap<PrimeField> mat(f, dim(), dim());
    for (int j = 0; j < dim(); ++j) {
      std::vector<std::uint32_t> sj(s.begin(), s.end());
      std::vector<std::uint32_t> tj(j + 1, 0);
      tj[j] = 1;
      auto prod = fppoly::rem(f, fppoly::mul(f, sj, tj), modulus);
      for (std::size_t r = 0; r < prod.size(); ++r)
        mat.at(static_cast<int>(r), j) = prod[r];
    }
    return mat;
  }

  /// I_lambda: multiplication by (sum lambda_n t^n)^{-1}.
  LinearMap<PrimeField> inv_map(const std::vector<std::uint32_t>& lambda) const {
    auto mat = mult_by(lambda);
    auto inv = left_inverse(mat);
    if (!inv)
      throw std::invalid_argument("InsAlgebraModel: lambda element is zero");
    return *inv;
  }

  /// Algebra-mode structure assignment for the matching presentation.
  StructureAssignment<PrimeField> assignment(
      const InsPresentation<PrimeField>& ins) const {
    StructureAssignment<PrimeField> s{carrier.field, StructureMode::algebra,
                                      dim(), {}};
    s.maps.emplace("mu", carrier.mult);
    for (int n = 0; n <= m; ++n) {
      std::vector<std::uint32_t> coords(dim(), 0);
      coords[n] = 1;
      s.maps.emplace("v" + std::to_string(n),
                     LinearMap<PrimeField>::column(carrier.field, coords));
    }
    for (std::size_t k = 0; k < ins.lambdas.size(); ++k)
      s.maps.emplace("inv" + std::to_string(k), inv_map(ins.lambdas[k]));
    return s;
  }
};

inline InsAlgebraModel build_field_model(std::uint32_t p, int m) {
  PrimeField f(p);
  if (m < 0) throw std::invalid_argument("build_field_model: m < 0");
  if (detail::ipow(static_cast<int>(p), m + 1) > (1L << 20))
    throw budget_error("build_field_model: p^(m+1) exceeds 2^20");
  const int d = m + 1;
  std::vector<std::uint32_t> unit(d, 0);
  unit[0] = 1;
  InsAlgebraModel model{
      p,
      m,
      fppoly::find_irreducible(f, m + 1),
      AlgebraData<PrimeField>{f, d, LinearMap<PrimeField>(f, d, d * d), unit},
      {}};
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::vector<std::uint32_t> ta(a + 1, 0), tb(b + 1, 0);
      ta[a] = 1;
      tb[b] = 1;
      auto prod = fppoly::rem(f, fppoly::mul(f, ta, tb), model.modulus);
      for (std::size_t r = 0; r < prod.size(); ++r)
        model.carrier.mult.at(static_cast<int>(r), a * d + b) = prod[r];
    }
  model.lambdas = all_nonzero_lambdas(f, m);
  return model;
}

// -- candidate coalgebra data and the certificate -----------------------

template <Field F>
struct InsCoalgebraData {
  F field;
  int dim = 0;
  int m = 0;
  LinearMap<F> delta;              // V -> V (x) V
  std::vector<LinearMap<F>> eps;   // m+1 functionals V -> K
  std::map<std::string, LinearMap<F>> inv;  // optional I maps, keyed by lambda

  void validate_shapes() const {
    if (delta.dom() != dim || delta.cod() != dim * dim)
      throw std::invalid_argument("InsCoalgebraData: delta must map V -> V (x) V");
    if (static_cast<int>(eps.size()) != m + 1)
      throw std::invalid_argument("InsCoalgebraData: need m+1 functionals");
    for (const auto& e : eps)
      if (e.cod() != 1 || e.dom() != dim)
        throw std::invalid_argument("InsCoalgebraData: eps must be functionals on V");
  }
};

template <Field F>
LinearMap<F> sigma_lambda(const InsCoalgebraData<F>& data,
                          const std::vector<typename F::Elt>& lambda) {
  data.validate_shapes();
  if (static_cast<int>(lambda.size()) != data.m + 1)
    throw std::invalid_argument("sigma_lambda: lambda length must be m+1");
  const F& k = data.field;
  LinearMap<F> row(k, 1, data.dim);
  for (int n = 0; n <= data.m; ++n)
    row = add(row, scale(lambda[n], data.eps[n]));
  return compose(tensor(row, LinearMap<F>::identity(k, data.dim)), data.delta);
}

template <Field F>
bool is_coassociative(const LinearMap<F>& delta) {
  const int d = delta.dom();
  if (delta.cod() != d * d)
    throw std::invalid_argument("is_coassociative: delta must map V -> V (x) V");
  auto id = LinearMap<F>::identity(delta.field(), d);
  return compose(tensor(delta, id), delta) == compose(tensor(id, delta), delta);
}

/// Smallest delta-stable subspace containing y: close span{y} under the
/// slice maps (phi (x) id) o delta and (id (x) phi) o delta over dual
/// basis functionals phi, then verify delta(W) lies in W (x) W.
template <Field F>
std::vector<std::vector<typename F::Elt>> subcoalgebra_generated(
    const LinearMap<F>& delta, const std::vector<typename F::Elt>& y) {
  const F& k = delta.field();
  const int d = delta.dom();
  if (!is_coassociative(delta))
    throw std::invalid_argument("subcoalgebra_generated: delta is not coassociative");
  if (static_cast<int>(y.size()) != d)
    throw std::invalid_argument("subcoalgebra_generated: vector dimension mismatch");

  std::vector<std::vector<typename F::Elt>> span{y};
  auto span_rank = [&]() {
    LinearMap<F> mat(k, d, static_cast<int>(span.size()));
    for (std::size_t c = 0; c < span.size(); ++c)
      for (int r = 0; r < d; ++r) mat.at(r, static_cast<int>(c)) = span[c][r];
    return rank(mat);
  };
  int cur = span_rank();
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t count = span.size();
    for (std::size_t w = 0; w < count; ++w) {
      auto dw = compose(delta, LinearMap<F>::column(k, span[w]));
      for (int j = 0; j < d; ++j) {
        std::vector<typename F::Elt> left(d, k.zero()), right(d, k.zero());
        for (int b = 0; b < d; ++b) left[b] = dw.at(j * d + b, 0);
        for (int a = 0; a < d; ++a) right[a] = dw.at(a * d + j, 0);
        for (auto& v : {left, right}) {
          span.push_back(v);
          int r = span_rank();
          if (r > cur) {
            cur = r;
            grew = true;
          } else {
            span.pop_back();
          }
        }
      }
    }
  }

  // Canonical basis: row-reduce the span.
  LinearMap<F> mat(k, static_cast<int>(span.size()), d);
  for (std::size_t r = 0; r < span.size(); ++r)
    for (int c = 0; c < d; ++c) mat.at(static_cast<int>(r), c) = span[r][c];
  auto rr = row_reduce(mat);
  std::vector<std::vector<typename F::Elt>> basis;
  for (int i = 0; i < rr.rank; ++i) {
    std::vector<typename F::Elt> v(d, k.zero());
    for (int c = 0; c < d; ++c) v[c] = rr.rref.at(i, c);
    basis.push_back(std::move(v));
  }

  // delta-stability: delta(b) must lie in W (x) W for every basis b.
  LinearMap<F> bmat(k, d, static_cast<int>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (int r = 0; r < d; ++r) bmat.at(r, static_cast<int>(c)) = basis[c][r];
  auto bb = tensor(bmat, bmat);
  for (const auto& b : basis)
    if (!solve_matrix(bb, compose(delta, LinearMap<F>::column(k, b))))
      throw std::logic_error("subcoalgebra_generated: closure not delta-stable");
  return basis;
}

template <Field F>
struct TrivialityCertificate {
  std::vector<typename F::Elt> lambda;  // nonzero, sum lambda_i eps_i = 0
  LinearMap<F> sigma;                   // the resulting sigma_lambda: zero
  bool concluded = false;               // no Ins_m-coalgebra on V != 0
};

/// Witness that the data cannot extend to an Ins_m-coalgebra: when
/// d <= m the m+1 functionals are dependent, so some nonzero lambda kills
/// them all and sigma_lambda = 0 admits no left inverse on V != 0.
template <Field F>
TrivialityCertificate<F> triviality_certificate(const InsCoalgebraData<F>& data) {
  data.validate_shapes();
  if (data.dim == 0)
    throw std::invalid_argument(
        "triviality_certificate: V = 0 is trivially a coalgebra; nothing to certify");
  if (data.dim > data.m)
    throw std::invalid_argument(
        "triviality_certificate: requires dim V <= m; refusing to guess beyond it");
  const F& k = data.field;
  // Functional matrix E: rows eps_0..eps_m; a kernel vector of E^T is a
  // dependency lambda with sum lambda_i eps_i = 0.
  LinearMap<F> et(k, data.dim, data.m + 1);
  for (int i = 0; i <= data.m; ++i)
    for (int c = 0; c < data.dim; ++c) et.at(c, i) = data.eps[i].at(0, c);
  auto basis = kernel_basis(et);
  if (basis.empty())
    throw std::logic_error("triviality_certificate: no dependency found (impossible)");
  TrivialityCertificate<F> cert{basis[0], sigma_lambda(data, basis[0]), true};
  if (!cert.sigma.is_zero())
    throw std::logic_error("triviality_certificate: sigma_lambda not zero (impossible)");
  return cert;
}

/// Replay a certificate against its data: lambda nonzero, the combined
/// functional vanishes entry-wise, and sigma_lambda recomputes to zero.
template <Field F>
CheckReport verify_certificate(const InsCoalgebraData<F>& data,
                               const TrivialityCertificate<F>& cert) {
  CheckReport report;
  const F& k = data.field;
  if (data.dim < 1) report.fail("certificate-empty-space");
  bool nonzero = false;
  for (const auto& e : cert.lambda)
    if (!k.is_zero(e)) nonzero = true;
  if (!nonzero) report.fail("certificate-lambda-zero");
  LinearMap<F> row(k, 1, data.dim);
  for (int n = 0; n <= data.m && n < static_cast<int>(cert.lambda.size()); ++n)
    row = add(row, scale(cert.lambda[n], data.eps[n]));
  if (!row.is_zero()) report.fail("certificate-dependency");
  if (!(sigma_lambda(data, cert.lambda) == cert.sigma) || !cert.sigma.is_zero())
    report.fail("certificate-sigma-nonzero");
  return report;
}

// -- brute-force oracle --------------------------------------------------

inline constexpr long kSearchBudget = 1L << 24;

/// All (delta, eps_0..eps_m) over F_p on K^d that are coassociative, have
/// eps_0 a two-sided counit, and sigma_lambda invertible for every
/// nonzero lambda. Enumeration order (and hence output order) is the
/// base-p big-endian encoding of (delta entries, eps entries), row-major;
/// jobs > 1 partitions the index range and concatenates in order.
inline std::vector<InsCoalgebraData<PrimeField>> brute_force_search(
    std::uint32_t p, int d, int m, int jobs = 1) {
  PrimeField f(p);
  if (d < 0 || m < 0) throw std::invalid_argument("brute_force_search: bad shape");
  const long digits = static_cast<long>(d) * d * d + (m + 1) * d;
  long total = 1;
  for (long i = 0; i < digits; ++i) {
    total *= p;
    if (total > kSearchBudget)
      throw budget_error("brute_force_search: p^(d^3 + (m+1)d) exceeds 2^24");
  }
  auto lambdas = all_nonzero_lambdas(f, m);

  auto candidate = [&](long idx) {
    InsCoalgebraData<PrimeField> data{f, d, m, LinearMap<PrimeField>(f, d * d, d),
                                      {}, {}};
    auto dg = detail::to_digits(idx, static_cast<int>(p), static_cast<int>(digits));
    std::size_t pos = 0;
    for (int r = 0; r < d * d; ++r)
      for (int c = 0; c < d; ++c) data.delta.at(r, c) = dg[pos++];
    for (int n = 0; n <= m; ++n) {
      LinearMap<PrimeField> row(f, 1, d);
      for (int c = 0; c < d; ++c) row.at(0, c) = dg[pos++];
      data.eps.push_back(std::move(row));
    }
    return data;
  };

  auto valid = [&](const InsCoalgebraData<PrimeField>& data) {
    if (!is_coassociative(data.delta)) return false;
    auto id = LinearMap<PrimeField>::identity(f, d);
    if (!(compose(tensor(data.eps[0], id), data.delta) == id)) return false;
    if (!(compose(tensor(id, data.eps[0]), data.delta) == id)) return false;
    for (const auto& lambda : lambdas) {
      auto sig = sigma_lambda(data, lambda);
      if (rank(sig) != d) return false;
    }
    return true;
  };

  if (jobs < 1) jobs = 1;
  if (jobs == 1 || total < 2 * jobs) {
    std::vector<InsCoalgebraData<PrimeField>> found;
    for (long idx = 0; idx < total; ++idx) {
      auto data = candidate(idx);
      if (valid(data)) found.push_back(std::move(data));
    }
    return found;
  }

  std::vector<std::vector<InsCoalgebraData<PrimeField>>> parts(jobs);
  std::vector<std::thread> workers;
  for (int j = 0; j < jobs; ++j)
    workers.emplace_back([&, j]() {
      long lo = total * j / jobs, hi = total * (j + 1) / jobs;
      for (long idx = lo; idx < hi; ++idx) {
        auto data = candidate(idx);
        if (valid(data)) parts[j].push_back(std::move(data));
      }
    });
  for (auto& w : workers) w.join();
  std::vector<InsCoalgebraData<PrimeField>> found;
  for (auto& part : parts)
    for (auto& data : part) found.push_back(std::move(data));
  return found;
}

/// The dual coalgebra of the field model: delta is the transposed
/// multiplication, eps_n evaluation at t^n, and the transposed I maps
/// witness every sigma_lambda inverse.
inline InsCoalgebraData<PrimeField> dualize_model(const InsAlgebraModel& model) {
  const PrimeField& f = model.carrier.field;
  const int d = model.dim();
  InsCoalgebraData<PrimeField> data{f, d, model.m,
                                    model.carrier.mult.transpose(), {}, {}};
  for (int n = 0; n <= model.m; ++n) {
    LinearMap<PrimeField> row(f, 1, d);
    row.at(0, n) = 1;
    data.eps.push_back(std::move(row));
  }
  for (const auto& lambda : model.lambdas)
    data.inv.emplace(lambda_string(f, lambda), model.inv_map(lambda).transpose());
  return data;
}

}  // namespace opcheck
