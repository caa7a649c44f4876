#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "opcheck/ins.hpp"
#include "test_util.hpp"

using namespace opcheck;
using testutil::Lcg;
using testutil::random_map;

namespace {

std::vector<std::uint32_t> mask_to_vec(int mask, int d) {
  std::vector<std::uint32_t> v(d);
  for (int i = 0; i < d; ++i) v[i] = (mask >> i) & 1;
  return v;
}

// All delta-stable F_2-subspaces containing y, as sets of coordinate
// masks; their intersection is the minimal one.
std::set<int> minimal_stable_subspace(const PrimeField& f2,
                                      const LinearMap<PrimeField>& delta,
                                      int y_mask) {
  const int d = delta.dom();
  const int points = 1 << d;
  std::set<int> meet;
  for (int pick = 0; pick < (1 << (points - 1)); ++pick) {
    std::set<int> t{0};
    for (int m = 1; m < points; ++m)
      if ((pick >> (m - 1)) & 1) t.insert(m);
    if (!t.count(y_mask)) continue;
    bool closed = true;
    for (int a : t)
      for (int b : t)
        if (!t.count(a ^ b)) closed = false;
    if (!closed) continue;

    LinearMap<PrimeField> span(f2, d, static_cast<int>(t.size()));
    int col = 0;
    for (int m : t) {
      auto v = mask_to_vec(m, d);
      for (int r = 0; r < d; ++r) span.at(r, col) = v[r];
      ++col;
    }
    auto bb = tensor(span, span);
    bool stable = true;
    for (int m : t) {
      auto img = compose(delta,
                         LinearMap<PrimeField>::column(f2, mask_to_vec(m, d)));
      if (!solve_matrix(bb, img)) stable = false;
    }
    if (!stable) continue;
    if (meet.empty()) {
      meet = t;
    } else {
      std::set<int> next;
      std::set_intersection(meet.begin(), meet.end(), t.begin(), t.end(),
                            std::inserter(next, next.begin()));
      meet = next;
    }
  }
  return meet;
}

std::set<int> basis_span_masks(
    const std::vector<std::vector<std::uint32_t>>& basis, int d) {
  std::set<int> out{0};
  const int n = static_cast<int>(basis.size());
  for (int pick = 1; pick < (1 << n); ++pick) {
    int mask = 0;
    for (int i = 0; i < n; ++i)
      if ((pick >> i) & 1)
        for (int c = 0; c < d; ++c)
          if (basis[i][c]) mask ^= (1 << c);
    out.insert(mask);
  }
  return out;
}

bool same_structure(const InsCoalgebraData<PrimeField>& a,
                    const InsCoalgebraData<PrimeField>& b) {
  if (a.dim != b.dim || a.m != b.m || !(a.delta == b.delta)) return false;
  for (std::size_t i = 0; i < a.eps.size(); ++i)
    if (!(a.eps[i] == b.eps[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("polynomial arithmetic and irreducible moduli") {
  PrimeField f2(2), f3(3);
  CHECK(fppoly::find_irreducible(f2, 1) == std::vector<std::uint32_t>{0, 1});
  CHECK(fppoly::find_irreducible(f2, 2) ==
        std::vector<std::uint32_t>{1, 1, 1});  // t^2 + t + 1
  CHECK(fppoly::find_irreducible(f3, 2) ==
        std::vector<std::uint32_t>{1, 0, 1});  // t^2 + 1
  CHECK(fppoly::is_irreducible(f2, {1, 1, 1}));
  CHECK_FALSE(fppoly::is_irreducible(f2, {1, 0, 1}));  // (t+1)^2
  CHECK(fppoly::mul(f2, {1, 1}, {1, 1}) ==
        std::vector<std::uint32_t>{1, 0, 1});
  CHECK(fppoly::rem(f2, {0, 0, 1}, {1, 1, 1}) ==
        std::vector<std::uint32_t>{1, 1});  // t^2 = t + 1 in F_4
}

TEST_CASE("lambda enumeration is lexicographic and bounded") {
  PrimeField f2(2);
  auto ls = all_nonzero_lambdas(f2, 1);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == std::vector<std::uint32_t>{0, 1});
  CHECK(ls[1] == std::vector<std::uint32_t>{1, 0});
  CHECK(ls[2] == std::vector<std::uint32_t>{1, 1});
  CHECK(all_nonzero_lambdas(PrimeField(3), 2).size() == 26);
  CHECK_THROWS_AS(all_nonzero_lambdas(f2, 25), budget_error);
}

TEST_CASE("field models") {
  auto f4 = build_field_model(2, 1);
  CHECK(f4.modulus == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(f4.dim() == 2);
  // 1*1 = 1, 1*t = t*1 = t, t*t = 1 + t.
  const auto& mult = f4.carrier.mult;
  CHECK(mult.at(0, 0) == 1);
  CHECK(mult.at(1, 1) == 1);
  CHECK(mult.at(1, 2) == 1);
  CHECK(mult.at(0, 3) == 1);
  CHECK(mult.at(1, 3) == 1);
  CHECK(validate_algebra(f4.carrier).ok());

  // lambda = (1,1): 1 + t inverts to t.
  LinearMap<PrimeField> by_t(f4.carrier.field, 2, 2);
  by_t.at(1, 0) = 1;
  by_t.at(0, 1) = 1;
  by_t.at(1, 1) = 1;
  CHECK(f4.inv_map({1, 1}) == by_t);

  // m = 0: the model is F_p itself and I_(1) is the identity.
  auto fp = build_field_model(5, 0);
  CHECK(fp.dim() == 1);
  CHECK(fp.inv_map({1}) ==
        LinearMap<PrimeField>::identity(fp.carrier.field, 1));

  CHECK(validate_algebra(build_field_model(3, 2).carrier).ok());
  CHECK_THROWS_AS(build_field_model(2, 20), budget_error);
}

TEST_CASE("presentations encode the inverse relations") {
  PrimeField f2(2);
  auto m1 = build_ins_presentation(f2, 1, all_nonzero_lambdas(f2, 1));
  CHECK(m1.presentation.generators.size() == 6);  // mu, v0, v1, inv0..inv2
  CHECK(m1.presentation.relations.size() == 6);   // 3 structural + 3 inverse
  CHECK(m1.presentation.relations[3].label == "inverse[0,1]");
  CHECK(m1.presentation.relations[5].label == "inverse[1,1]");

  RationalField q;
  auto m0 = build_ins_presentation(q, 0, {{q.one()}});
  CHECK(m0.presentation.relations.size() == 4);

  CHECK_THROWS_AS(build_ins_presentation(q, 1, {{q.zero(), q.zero()}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_ins_presentation(q, 1, {{q.one()}}),
                  std::invalid_argument);
}

TEST_CASE("models satisfy every relation of their presentation") {
  for (auto [p, m] : {std::pair<std::uint32_t, int>{2, 1}, {3, 1}}) {
    auto model = build_field_model(p, m);
    auto pres = build_ins_presentation(model.carrier.field, m, model.lambdas);
    auto rep = check_relations(pres.presentation, model.assignment(pres));
    INFO("p=" << p << " m=" << m);
    CHECK(rep.ok());
  }

  // Breaking one inverse map is caught by exactly its relation.
  auto f4 = build_field_model(2, 1);
  auto pres = build_ins_presentation(f4.carrier.field, 1, f4.lambdas);
  auto bad = f4.assignment(pres);
  bad.maps.at("inv2") = LinearMap<PrimeField>::identity(f4.carrier.field, 2);
  auto rep = check_relations(pres.presentation, bad);
  REQUIRE(rep.failures.size() == 1);
  CHECK(rep.failures[0].note == "inverse[1,1]");
}

TEST_CASE("sigma_lambda") {
  RationalField q;
  // d = 1: everything is scalar. delta = 3, eps = (2, 5), lambda = (1, 2):
  // sigma = 3 * (2 + 10) = 36.
  InsCoalgebraData<RationalField> tiny{
      q, 1, 1,
      LinearMap<RationalField>::column(q, {q.parse("3")}),
      {LinearMap<RationalField>::row(q, {q.parse("2")}),
       LinearMap<RationalField>::row(q, {q.parse("5")})},
      {}};
  auto s = sigma_lambda(tiny, {q.one(), q.parse("2")});
  CHECK(s.at(0, 0) == q.parse("36"));
  CHECK_THROWS_AS(sigma_lambda(tiny, {q.one()}), std::invalid_argument);

  // Linearity in lambda on random data.
  PrimeField f3(3);
  Lcg rng(31);
  InsCoalgebraData<PrimeField> data{f3, 2, 1, random_map(f3, rng, 4, 2),
                                    {random_map(f3, rng, 1, 2),
                                     random_map(f3, rng, 1, 2)},
                                    {}};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::uint32_t> a{static_cast<std::uint32_t>(rng.below(3)),
                                 static_cast<std::uint32_t>(rng.below(3))};
    std::vector<std::uint32_t> b{static_cast<std::uint32_t>(rng.below(3)),
                                 static_cast<std::uint32_t>(rng.below(3))};
    std::vector<std::uint32_t> ab{f3.add(a[0], b[0]), f3.add(a[1], b[1])};
    CHECK(sigma_lambda(data, ab) ==
          add(sigma_lambda(data, a), sigma_lambda(data, b)));
  }
}

TEST_CASE("the dualized field model is a valid structure") {
  auto dual = dualize_model(build_field_model(2, 1));
  const PrimeField& f2 = dual.field;
  CHECK(dual.dim == 2);
  CHECK(is_coassociative(dual.delta));

  // eps_0 is a two-sided counit for delta.
  auto id = LinearMap<PrimeField>::identity(f2, 2);
  CHECK(compose(tensor(dual.eps[0], id), dual.delta) == id);
  CHECK(compose(tensor(id, dual.eps[0]), dual.delta) == id);

  // sigma_lambda is invertible for every nonzero lambda, with the stored
  // transposed I map as its unique inverse.
  for (const auto& lambda : all_nonzero_lambdas(f2, 1)) {
    auto sig = sigma_lambda(dual, lambda);
    REQUIRE(rank(sig) == 2);
    const auto& stored = dual.inv.at(lambda_string(f2, lambda));
    CHECK(compose(stored, sig) == id);
    CHECK(*left_inverse(sig) == stored);
  }
}

TEST_CASE("subcoalgebra generation") {
  RationalField q;

  // delta = 0: the line through y.
  LinearMap<RationalField> zero(q, 4, 2);
  auto line = subcoalgebra_generated(zero, {q.one(), q.parse("2")});
  REQUIRE(line.size() == 1);
  CHECK(line[0] == std::vector<mpq_class>{1, 2});

  // Two group-likes: e_1 generates its own line; e_1 + e_2 generates
  // everything.
  LinearMap<RationalField> grp(q, 4, 2);
  grp.at(0, 0) = q.one();
  grp.at(3, 1) = q.one();
  auto e1 = subcoalgebra_generated(grp, {q.one(), q.zero()});
  REQUIRE(e1.size() == 1);
  CHECK(e1[0] == std::vector<mpq_class>{1, 0});
  CHECK(subcoalgebra_generated(grp, {q.one(), q.one()}).size() == 2);

  // The dual of F_4 is a simple coalgebra: every nonzero vector
  // generates all of it.
  auto dual = dualize_model(build_field_model(2, 1));
  for (int mask = 1; mask < 4; ++mask)
    CHECK(subcoalgebra_generated(dual.delta, mask_to_vec(mask, 2)).size() ==
          2);

  LinearMap<RationalField> bad(q, 4, 2);
  bad.at(1, 0) = q.one();
  CHECK_THROWS_AS(subcoalgebra_generated(bad, {q.one(), q.zero()}),
                  std::invalid_argument);
}

TEST_CASE("subcoalgebra generation agrees with exhaustive subspace search") {
  PrimeField f2(2);

  // d = 2: every coassociative delta, every nonzero y.
  int coassoc_count = 0;
  for (int table = 0; table < 256; ++table) {
    LinearMap<PrimeField> delta(f2, 4, 2);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 2; ++c) delta.at(r, c) = (table >> (r * 2 + c)) & 1;
    if (!is_coassociative(delta)) continue;
    ++coassoc_count;
    for (int y = 1; y < 4; ++y) {
      auto basis = subcoalgebra_generated(delta, mask_to_vec(y, 2));
      CHECK(basis_span_masks(basis, 2) == minimal_stable_subspace(f2, delta, y));
    }
  }
  CHECK(coassoc_count > 10);  // the scan is not vacuous

  // d = 3: block sums of the F_4 dual with a group-like line, plus the
  // three-group-like diagonal.
  auto dual = dualize_model(build_field_model(2, 1));
  LinearMap<PrimeField> block(f2, 9, 3);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) {
      int big = 3 * (r / 2) + (r % 2);  // embed W (x) W into V (x) V
      block.at(big, c) = dual.delta.at(r, c);
    }
  block.at(8, 2) = 1;  // third coordinate is group-like
  LinearMap<PrimeField> diag(f2, 9, 3);
  for (int i = 0; i < 3; ++i) diag.at(4 * i, i) = 1;
  for (const auto& delta : {block, diag}) {
    REQUIRE(is_coassociative(delta));
    for (int y = 1; y < 8; ++y) {
      auto basis = subcoalgebra_generated(delta, mask_to_vec(y, 3));
      CHECK(basis_span_masks(basis, 3) == minimal_stable_subspace(f2, delta, y));
    }
  }
}

TEST_CASE("triviality certificates") {
  PrimeField f2(2);

  // eps_0 = eps_1 = (1) on a line: the dependency is (1,1).
  InsCoalgebraData<PrimeField> both{f2, 1, 1, LinearMap<PrimeField>(f2, 1, 1),
                                    {LinearMap<PrimeField>::row(f2, {1u}),
                                     LinearMap<PrimeField>::row(f2, {1u})},
                                    {}};
  both.delta.at(0, 0) = 1;
  auto cert = triviality_certificate(both);
  CHECK(cert.lambda == std::vector<std::uint32_t>{1, 1});
  CHECK(cert.sigma.is_zero());
  CHECK(cert.concluded);
  CHECK(verify_certificate(both, cert).ok());

  // eps_1 already vanishes: lambda = (0,1).
  auto second = both;
  second.eps[1] = LinearMap<PrimeField>(f2, 1, 1);
  CHECK(triviality_certificate(second).lambda ==
        std::vector<std::uint32_t>{0, 1});

  // d = 2, m = 2 with random functionals over F_3: always certifiable.
  PrimeField f3(3);
  Lcg rng(32);
  for (int trial = 0; trial < 25; ++trial) {
    InsCoalgebraData<PrimeField> data{f3, 2, 2, random_map(f3, rng, 4, 2),
                                      {random_map(f3, rng, 1, 2),
                                       random_map(f3, rng, 1, 2),
                                       random_map(f3, rng, 1, 2)},
                                      {}};
    CHECK(verify_certificate(data, triviality_certificate(data)).ok());
  }

  // Outside the theorem's regime the call refuses.
  InsCoalgebraData<PrimeField> wide{f2, 2, 1, LinearMap<PrimeField>(f2, 4, 2),
                                    {LinearMap<PrimeField>(f2, 1, 2),
                                     LinearMap<PrimeField>(f2, 1, 2)},
                                    {}};
  CHECK_THROWS_AS(triviality_certificate(wide), std::invalid_argument);
  InsCoalgebraData<PrimeField> empty{f2, 0, 1, LinearMap<PrimeField>(f2, 0, 0),
                                     {LinearMap<PrimeField>(f2, 1, 0),
                                      LinearMap<PrimeField>(f2, 1, 0)},
                                     {}};
  CHECK_THROWS_AS(triviality_certificate(empty), std::invalid_argument);

  // A doctored certificate does not replay.
  auto forged = cert;
  forged.lambda = {1, 0};
  CHECK_FALSE(verify_certificate(both, forged).ok());
}

TEST_CASE("brute-force search matches the theorem in low dimension") {
  CHECK(brute_force_search(2, 1, 1).empty());
  CHECK(brute_force_search(3, 1, 1).empty());
  CHECK(brute_force_search(2, 1, 2).empty());

  // m = 0, d = 1: the one survivor is the counit structure on K.
  auto found = brute_force_search(2, 1, 0);
  REQUIRE(found.size() == 1);
  CHECK(found[0].delta.at(0, 0) == 1);
  CHECK(found[0].eps[0].at(0, 0) == 1);

  CHECK_THROWS_AS(brute_force_search(2, 3, 1), budget_error);
}

TEST_CASE("search finds the dual field model beyond the trivial regime") {
  auto found = brute_force_search(2, 2, 1);
  REQUIRE_FALSE(found.empty());
  auto dual = dualize_model(build_field_model(2, 1));
  bool contains_dual = false;
  for (const auto& data : found)
    if (same_structure(data, dual)) contains_dual = true;
  CHECK(contains_dual);

  // Every survivor replays: coassociative, counital, all sigma invertible.
  const PrimeField& f2 = found[0].field;
  auto id = LinearMap<PrimeField>::identity(f2, 2);
  for (const auto& data : found) {
    CHECK(is_coassociative(data.delta));
    CHECK(compose(tensor(data.eps[0], id), data.delta) == id);
    CHECK(compose(tensor(id, data.eps[0]), data.delta) == id);
    for (const auto& lambda : all_nonzero_lambdas(f2, 1))
      CHECK(rank(sigma_lambda(data, lambda)) == 2);
  }
}

TEST_CASE("search output is independent of the thread count") {
  auto one = brute_force_search(2, 2, 1, 1);
  auto four = brute_force_search(2, 2, 1, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i)
    CHECK(same_structure(one[i], four[i]));
}
