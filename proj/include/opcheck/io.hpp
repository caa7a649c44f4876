#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "opcheck/algebra.hpp"
#include "opcheck/coalgebra.hpp"
#include "opcheck/field.hpp"
#include "opcheck/ins.hpp"
#include "opcheck/linear_map.hpp"
#include "opcheck/operad.hpp"
#include "opcheck/presentation.hpp"

// JSON (de)serialization for every on-disk object, plus input digests.
// All emitters insert keys in a fixed order and serialize maps in their
// sorted iteration order, so identical objects give identical bytes.

namespace opcheck::io {

using json = nlohmann::ordered_json;

/// Malformed input files and format violations; the CLI maps this (and
/// the underlying json parse errors) to exit code 2.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- fields -------------------------------------------------------------

struct FieldDesc {
  std::string kind;  // "Q" or "Fp"
  std::uint32_t p = 0;

  friend bool operator==(const FieldDesc&, const FieldDesc&) = default;
};

inline FieldDesc field_desc_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw io_error(
        "field: expected {\"kind\":\"Q\"} or {\"kind\":\"Fp\",\"p\":...}");
  FieldDesc d;
  d.kind = j.at("kind").get<std::string>();
  if (d.kind == "Q") return d;
  if (d.kind == "Fp") {
    if (!j.contains("p") || !j.at("p").is_number_integer())
      throw io_error("field: kind Fp needs an integer prime p");
    long long p = j.at("p").get<long long>();
    if (p < 2) throw io_error("field: p must be at least 2");
    d.p = static_cast<std::uint32_t>(p);
    return d;
  }
  throw io_error("field: unknown kind '" + d.kind + "'");
}

inline json field_to_json(const RationalField&) {
  return json{{"kind", "Q"}};
}

inline json field_to_json(const PrimeField& f) {
  return json{{"kind", "Fp"}, {"p", f.modulus()}};
}

inline FieldDesc describe(const RationalField&) { return {"Q", 0}; }
inline FieldDesc describe(const PrimeField& f) { return {"Fp", f.modulus()}; }

template <Field F>
void require_same_field(const FieldDesc& d, const F& k) {
  if (d != describe(k))
    throw io_error("field mismatch: embedded object is over a different field "
                   "than its container");
}

/// Instantiate the one concrete field a descriptor names and run fn on
/// it; both branches must return the same type.
template <typename Fn>
decltype(auto) with_field(const FieldDesc& d, Fn&& fn) {
  if (d.kind == "Q") return fn(RationalField{});
  return fn(PrimeField(d.p));
}

// -- scalars, vectors, matrices ------------------------------------------

inline json scalar_to_json(const RationalField&, const mpq_class& a) {
  return json(a.get_str());
}

inline json scalar_to_json(const PrimeField&, std::uint32_t a) {
  return json(a);
}

template <Field F>
typename F::Elt scalar_from_json(const F& k, const json& j) {
  try {
    if (j.is_string()) return k.parse(j.get<std::string>());
    if (j.is_number_integer())
      return k.parse(std::to_string(j.get<long long>()));
  } catch (const std::invalid_argument& e) {
    throw io_error(std::string("scalar: ") + e.what());
  }
  throw io_error("scalar: expected an integer or a string, got " + j.dump());
}

template <Field F>
json vector_to_json(const F& k, const std::vector<typename F::Elt>& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(scalar_to_json(k, e));
  return a;
}

template <Field F>
std::vector<typename F::Elt> vector_from_json(const F& k, const json& j) {
  if (!j.is_array()) throw io_error("vector: expected an array of scalars");
  std::vector<typename F::Elt> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(scalar_from_json(k, e));
  return v;
}

/// with_field=true matches the stand-alone matrix file format; embedded
/// matrices inherit the container's field and omit the key.
template <Field F>
json matrix_to_json(const LinearMap<F>& m, bool with_field = false) {
  json j = json::object();
  if (with_field) j["field"] = field_to_json(m.field());
  j["dom"] = m.dom();
  j["cod"] = m.cod();
  json rows = json::array();
  for (int r = 0; r < m.cod(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.dom(); ++c)
      row.push_back(scalar_to_json(m.field(), m.at(r, c)));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

template <Field F>
LinearMap<F> matrix_from_json(const F& k, const json& j) {
  if (!j.is_object() || !j.contains("dom") || !j.contains("cod") ||
      !j.contains("entries"))
    throw io_error("matrix: expected {\"dom\",\"cod\",\"entries\"}");
  if (j.contains("field"))
    require_same_field(field_desc_from_json(j.at("field")), k);
  long dom = j.at("dom").get<long>();
  long cod = j.at("cod").get<long>();
  if (dom < 0 || cod < 0) throw io_error("matrix: negative dimension");
  const json& rows = j.at("entries");
  if (!rows.is_array() || static_cast<long>(rows.size()) != cod)
    throw io_error("matrix: need exactly cod rows");
  LinearMap<F> m(k, static_cast<int>(cod), static_cast<int>(dom));
  for (long r = 0; r < cod; ++r) {
    const json& row = rows.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<long>(row.size()) != dom)
      throw io_error("matrix: row " + std::to_string(r) +
                     " does not have dom entries");
    for (long c = 0; c < dom; ++c)
      m.at(static_cast<int>(r), static_cast<int>(c)) =
          scalar_from_json(k, row.at(static_cast<std::size_t>(c)));
  }
  return m;
}

// -- operads --------------------------------------------------------------

// {"field","N","dims","unit","action":{"n":[s_1..s_{n-1}]},
//  "pcomp":{"m,n,i":matrix}} with the slot i 1-based on disk.

template <Field F>
json operad_to_json(const TruncatedOperad<F>& p) {
  json j = json::object();
  j["field"] = field_to_json(p.field);
  j["N"] = p.max_arity;
  j["dims"] = json(p.dims);
  j["unit"] = vector_to_json(p.field, p.unit);
  json action = json::object();
  for (int n = 2; n <= p.max_arity; ++n) {
    json mats = json::array();
    for (const auto& m : p.action.at(n)) mats.push_back(matrix_to_json(m));
    action[std::to_string(n)] = std::move(mats);
  }
  j["action"] = std::move(action);
  json pc = json::object();
  for (const auto& [key, mat] : p.pcomp) {
    std::string name = std::to_string(key.m) + "," + std::to_string(key.n) +
                       "," + std::to_string(key.slot + 1);
    pc[name] = matrix_to_json(mat);
  }
  j["pcomp"] = std::move(pc);
  return j;
}

inline std::vector<long> parse_int_list(const std::string& s, char sep) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw io_error("expected an integer list, got '" + s + "'");
    }
  }
  return out;
}

template <Field F>
TruncatedOperad<F> operad_from_json(const F& k, const json& j) {
  if (!j.is_object() || !j.contains("N") || !j.contains("dims") ||
      !j.contains("unit"))
    throw io_error("operad: expected {\"field\",\"N\",\"dims\",\"unit\","
                   "\"action\",\"pcomp\"}");
  if (j.contains("field"))
    require_same_field(field_desc_from_json(j.at("field")), k);
  TruncatedOperad<F> p(k);
  p.max_arity = j.at("N").get<int>();
  if (p.max_arity < 1 || p.max_arity > kMaxSymmetricArity)
    throw io_error("operad: N must be between 1 and " +
                   std::to_string(kMaxSymmetricArity));
  p.dims = j.at("dims").get<std::vector<int>>();
  if (static_cast<int>(p.dims.size()) != p.max_arity + 1)
    throw io_error("operad: dims must list arities 0..N");
  for (int d : p.dims)
    if (d < 0) throw io_error("operad: negative dimension");
  p.unit = vector_from_json(k, j.at("unit"));
  if (static_cast<int>(p.unit.size()) != p.dims[1])
    throw io_error("operad: unit must be an element of P(1)");
  p.action.assign(p.max_arity + 1, {});
  if (j.contains("action")) {
    if (!j.at("action").is_object())
      throw io_error("operad: action must map arities to matrix lists");
    for (const auto& [key, val] : j.at("action").items()) {
      auto ints = parse_int_list(key, ',');
      if (ints.size() != 1 || ints[0] < 2 || ints[0] > p.max_arity)
        throw io_error("operad: bad action arity '" + key + "'");
      int n = static_cast<int>(ints[0]);
      if (!val.is_array() || static_cast<int>(val.size()) != n - 1)
        throw io_error("operad: action at arity " + key + " needs n-1 "
                       "transposition matrices");
      for (const auto& mj : val) {
        auto m = matrix_from_json(k, mj);
        if (m.dom() != p.dims[n] || m.cod() != p.dims[n])
          throw io_error("operad: action matrix at arity " + key +
                         " is not square of size dims[n]");
        p.action[n].push_back(std::move(m));
      }
    }
  }
  for (int n = 2; n <= p.max_arity; ++n)
    if (p.action[n].empty() && p.dims[n] == 0)
      p.action[n].assign(n - 1, LinearMap<F>(k, 0, 0));
  for (int n = 2; n <= p.max_arity; ++n)
    if (static_cast<int>(p.action[n].size()) != n - 1)
      throw io_error("operad: missing action matrices at arity " +
                     std::to_string(n));
  if (j.contains("pcomp")) {
    if (!j.at("pcomp").is_object())
      throw io_error("operad: pcomp must map \"m,n,i\" keys to matrices");
    for (const auto& [key, val] : j.at("pcomp").items()) {
      auto ints = parse_int_list(key, ',');
      if (ints.size() != 3)
        throw io_error("operad: bad pcomp key '" + key + "'");
      int m = static_cast<int>(ints[0]);
      int n = static_cast<int>(ints[1]);
      int slot = static_cast<int>(ints[2]) - 1;
      if (!pcomp_in_range(p.max_arity, m, n, slot))
        throw io_error("operad: pcomp key '" + key +
                       "' out of range for the truncation");
      auto mat = matrix_from_json(k, val);
      if (mat.cod() != p.dims[m + n - 1] || mat.dom() != p.dims[m] * p.dims[n])
        throw io_error("operad: pcomp matrix at '" + key +
                       "' must map P(m) (x) P(n) -> P(m+n-1)");
      p.pcomp.emplace(PcompKey{m, n, slot}, std::move(mat));
    }
  }
  return p;
}

// -- algebras ---------------------------------------------------------------

template <Field F>
json algebra_to_json(const AlgebraData<F>& a) {
  json j = json::object();
  j["field"] = field_to_json(a.field);
  j["dim"] = a.dim;
  j["mult"] = matrix_to_json(a.mult);
  j["unit"] = vector_to_json(a.field, a.unit);
  return j;
}

template <Field F>
AlgebraData<F> algebra_from_json(const F& k, const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("mult") ||
      !j.contains("unit"))
    throw io_error("algebra: expected {\"field\",\"dim\",\"mult\",\"unit\"}");
  if (j.contains("field"))
    require_same_field(field_desc_from_json(j.at("field")), k);
  AlgebraData<F> a{k, j.at("dim").get<int>(), LinearMap<F>(k, 0, 0), {}};
  if (a.dim < 0) throw io_error("algebra: negative dimension");
  a.mult = matrix_from_json(k, j.at("mult"));
  a.unit = vector_from_json(k, j.at("unit"));
  if (a.mult.cod() != a.dim || a.mult.dom() != a.dim * a.dim ||
      static_cast<int>(a.unit.size()) != a.dim)
    throw io_error("algebra: mult must be dim x dim^2 and unit length dim");
  return a;
}

// -- presentations ---------------------------------------------------------

// Relations are stored as strings in the same grammar the parser accepts:
//   term  := "x"INT | "(" NAME term* ")"
//   combo := [SCALAR "*"] term { "+" [SCALAR "*"] term }
//   relation := combo "=" combo

template <Field F>
std::string combo_to_string(const F& k, const TermCombo<F>& combo) {
  if (combo.terms.empty())
    throw io_error("combo: the grammar has no empty combination");
  std::string s;
  for (std::size_t i = 0; i < combo.terms.size(); ++i) {
    if (i) s += " + ";
    const auto& [coeff, tree] = combo.terms[i];
    if (!(coeff == k.one())) s += k.to_string(coeff) + " * ";
    s += tree.to_string();
  }
  return s;
}

template <Field F>
std::string relation_to_string(const F& k, const Relation<F>& rel) {
  return combo_to_string(k, rel.lhs) + " = " + combo_to_string(k, rel.rhs);
}

template <Field F>
json presentation_to_json(const OperadPresentation<F>& p) {
  json j = json::object();
  j["field"] = field_to_json(p.field);
  json gens = json::array();
  for (const auto& g : p.generators)
    gens.push_back(json{{"name", g.name}, {"arity", g.arity}});
  j["generators"] = std::move(gens);
  json rels = json::array();
  for (const auto& r : p.relations)
    rels.push_back(json{{"label", r.label},
                        {"relation", relation_to_string(p.field, r)}});
  j["relations"] = std::move(rels);
  return j;
}

template <Field F>
OperadPresentation<F> presentation_from_json(const F& k, const json& j) {
  if (!j.is_object() || !j.contains("generators") || !j.contains("relations"))
    throw io_error(
        "presentation: expected {\"field\",\"generators\",\"relations\"}");
  if (j.contains("field"))
    require_same_field(field_desc_from_json(j.at("field")), k);
  OperadPresentation<F> p{k, {}, {}};
  for (const auto& gj : j.at("generators")) {
    if (!gj.is_object() || !gj.contains("name") || !gj.contains("arity"))
      throw io_error("presentation: generator needs {\"name\",\"arity\"}");
    Generator g{gj.at("name").get<std::string>(), gj.at("arity").get<int>()};
    if (g.name.empty() || g.arity < 0)
      throw io_error("presentation: generator '" + g.name + "' is malformed");
    p.generators.push_back(std::move(g));
  }
  for (const auto& rj : j.at("relations")) {
    if (!rj.is_object() || !rj.contains("relation"))
      throw io_error("presentation: relation needs {\"label\",\"relation\"}");
    std::string label =
        rj.contains("label") ? rj.at("label").get<std::string>() : "";
    try {
      p.relations.push_back(
          parse_relation(k, rj.at("relation").get<std::string>(), label));
    } catch (const std::invalid_argument& e) {
      throw io_error("presentation: " + std::string(e.what()));
    }
  }
  return p;
}

// -- structure assignments ---------------------------------------------------

template <Field F>
json structure_to_json(const StructureAssignment<F>& s) {
  json j = json::object();
  j["field"] = field_to_json(s.field);
  j["mode"] = s.mode == StructureMode::algebra ? "algebra" : "coalgebra";
  j["dim"] = s.dim;
  json maps = json::object();
  for (const auto& [name, m] : s.maps) maps[name] = matrix_to_json(m);
  j["maps"] = std::move(maps);
  return j;
}

template <Field F>
StructureAssignment<F> structure_from_json(const F& k, const json& j) {
  if (!j.is_object() || !j.contains("mode") || !j.contains("dim") ||
      !j.contains("maps"))
    throw io_error(
        "structure: expected {\"field\",\"mode\",\"dim\",\"maps\"}");
  if (j.contains("field"))
    require_same_field(field_desc_from_json(j.at("field")), k);
  StructureAssignment<F> s{k, StructureMode::algebra, j.at("dim").get<int>(), {}};
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "coalgebra")
    s.mode = StructureMode::coalgebra;
  else if (mode != "algebra")
    throw io_error("structure: mode must be \"algebra\" or \"coalgebra\"");
  if (s.dim < 0) throw io_error("structure: negative dimension");
  for (const auto& [name, mj] : j.at("maps").items())
    s.maps.emplace(name, matrix_from_json(k, mj));
  return s;
}

// -- coalgebras over an operad ------------------------------------------------

template <Field F>
json coalgebra_to_json(const CoalgebraOverOperad<F>& c) {
  json j = json::object();
  j["operad"] = operad_to_json(c.operad);
  j["dim"] = c.dim;
  json maps = json::array();
  for (const auto& m : c.maps) maps.push_back(matrix_to_json(m));
  j["maps"] = std::move(maps);
  return j;
}

template <Field F>
CoalgebraOverOperad<F> coalgebra_from_json(const F& k, const json& j) {
  if (!j.is_object() || !j.contains("operad") || !j.contains("dim") ||
      !j.contains("maps"))
    throw io_error("coalgebra: expected {\"operad\",\"dim\",\"maps\"}");
  CoalgebraOverOperad<F> c{operad_from_json(k, j.at("operad")),
                           j.at("dim").get<int>(),
                           {}};
  if (c.dim < 0) throw io_error("coalgebra: negative dimension");
  if (!j.at("maps").is_array() ||
      static_cast<int>(j.at("maps").size()) != c.operad.max_arity + 1)
    throw io_error("coalgebra: maps must list arities 0..N");
  for (const auto& mj : j.at("maps"))
    c.maps.push_back(matrix_from_json(k, mj));
  return c;
}

// -- Ins structures and certificates -----------------------------------------

template <Field F>
json ins_coalgebra_to_json(const InsCoalgebraData<F>& d) {
  json j = json::object();
  j["field"] = field_to_json(d.field);
  j["dim"] = d.dim;
  j["m"] = d.m;
  j["delta"] = matrix_to_json(d.delta);
  json eps = json::array();
  for (const auto& e : d.eps) eps.push_back(matrix_to_json(e));
  j["eps"] = std::move(eps);
  if (!d.inv.empty()) {
    json inv = json::object();
    for (const auto& [name, m] : d.inv) inv[name] = matrix_to_json(m);
    j["inv"] = std::move(inv);
  }
  return j;
}

template <Field F>
InsCoalgebraData<F> ins_coalgebra_from_json(const F& k, const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("m") ||
      !j.contains("delta") || !j.contains("eps"))
    throw io_error(
        "ins structure: expected {\"field\",\"dim\",\"m\",\"delta\",\"eps\"}");
  if (j.contains("field"))
    require_same_field(field_desc_from_json(j.at("field")), k);
  InsCoalgebraData<F> d{k, j.at("dim").get<int>(), j.at("m").get<int>(),
                        LinearMap<F>(k, 0, 0), {}, {}};
  if (d.dim < 0 || d.m < 0)
    throw io_error("ins structure: dim and m must be nonnegative");
  d.delta = matrix_from_json(k, j.at("delta"));
  for (const auto& ej : j.at("eps"))
    d.eps.push_back(matrix_from_json(k, ej));
  if (j.contains("inv"))
    for (const auto& [name, mj] : j.at("inv").items())
      d.inv.emplace(name, matrix_from_json(k, mj));
  try {
    d.validate_shapes();
  } catch (const std::invalid_argument& e) {
    throw io_error(std::string("ins structure: ") + e.what());
  }
  return d;
}

template <Field F>
json certificate_to_json(const F& k, const TrivialityCertificate<F>& c) {
  json j = json::object();
  j["field"] = field_to_json(k);
  j["lambda"] = vector_to_json(k, c.lambda);
  j["sigma"] = matrix_to_json(c.sigma);
  j["concluded"] = c.concluded;
  j["replay"] = json::array(
      {"lambda is nonzero",
       "sum_n lambda_n * eps_n = 0 against the structure file's functionals",
       "((sum_n lambda_n * eps_n) (x) id) o delta equals the sigma matrix "
       "and is zero, so no left inverse exists on V != 0"});
  return j;
}

template <Field F>
TrivialityCertificate<F> certificate_from_json(const F& k, const json& j) {
  if (!j.is_object() || !j.contains("lambda") || !j.contains("sigma") ||
      !j.contains("concluded"))
    throw io_error(
        "certificate: expected {\"lambda\",\"sigma\",\"concluded\"}");
  if (j.contains("field"))
    require_same_field(field_desc_from_json(j.at("field")), k);
  return TrivialityCertificate<F>{vector_from_json(k, j.at("lambda")),
                                  matrix_from_json(k, j.at("sigma")),
                                  j.at("concluded").get<bool>()};
}

// -- findings -----------------------------------------------------------------

inline json finding_to_json(const Finding& f) {
  json j = json::object();
  j["check"] = f.check;
  if (!f.where.empty()) j["where"] = json(f.where);
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}

// -- input plumbing -------------------------------------------------------------

/// Whole file, or stdin when path is "-".
inline std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw io_error(what + ": " + e.what());
  }
}

/// FNV-1a, 64-bit, as 16 hex digits; digests identify report inputs.
inline std::string digest(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace opcheck::io
