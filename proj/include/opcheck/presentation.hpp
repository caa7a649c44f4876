#pragma once

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opcheck/check_report.hpp"
#include "opcheck/linear_map.hpp"
#include "opcheck/multi_index.hpp"
#include "opcheck/permutation.hpp"
#include "opcheck/solve.hpp"

namespace opcheck {

// Operads presented by generators and relations, and the evaluation of
// relation trees against a concrete structure, either on an algebra
// (each generator g becomes a map V^(x)arity -> V) or on a coalgebra
// (V -> V^(x)arity).
//
// Term syntax:   term     := "x"INT | "(" NAME term* ")"
//                combo    := [SCALAR "*"] term { "+" [SCALAR "*"] term }
//                relation := combo "=" combo
// Leaves are numbered from 1 in the syntax and 0-based internally. Every
// term of a relation must use each leaf of its arity exactly once.

struct Generator {
  std::string name;
  int arity = 0;
};

class Tree {
 public:
  static Tree leaf(int slot) {
    Tree t;
    t.slot_ = slot;
    return t;
  }
  static Tree node(std::string op, std::vector<Tree> children) {
    Tree t;
    t.slot_ = -1;
    t.op_ = std::move(op);
    t.children_ = std::move(children);
    return t;
  }

  bool is_leaf() const { return slot_ >= 0; }
  int slot() const { return slot_; }
  const std::string& op() const { return op_; }
  const std::vector<Tree>& children() const { return children_; }

  int leaf_count() const {
    if (is_leaf()) return 1;
    int n = 0;
    for (const auto& c : children_) n += c.leaf_count();
    return n;
  }

  /// Leaf labels in planar (left to right) order.
  void planar_leaves(std::vector<int>& out) const {
    if (is_leaf()) {
      out.push_back(slot_);
      return;
    }
    for (const auto& c : children_) c.planar_leaves(out);
  }

  std::string to_string() const {
    if (is_leaf()) return "x" + std::to_string(slot_ + 1);
    std::string s = "(" + op_;
    for (const auto& c : children_) s += " " + c.to_string();
    return s + ")";
  }

 private:
  int slot_ = -1;
  std::string op_;
  std::vector<Tree> children_;
};

template <Field F>
struct TermCombo {
  std::vector<std::pair<typename F::Elt, Tree>> terms;
};

template <Field F>
struct Relation {
  std::string label;
  TermCombo<F> lhs, rhs;
};

template <Field F>
struct OperadPresentation {
  F field;
  std::vector<Generator> generators;
  std::vector<Relation<F>> relations;

  const Generator& generator(const std::string& name) const {
    for (const auto& g : generators)
      if (g.name == name) return g;
    throw std::invalid_argument("presentation: unknown generator '" + name + "'");
  }
};

enum class StructureMode { algebra, coalgebra };

template <Field F>
struct StructureAssignment {
  F field;
  StructureMode mode = StructureMode::algebra;
  int dim = 0;
  std::map<std::string, LinearMap<F>> maps;
};

// -- parsing ----------------------------------------------------------

namespace detail {

inline std::vector<std::string> tokenize_term(const std::string& src) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&]() {
    if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  };
  for (char ch : src) {
    if (ch == '(' || ch == ')' || ch == '+' || ch == '*' || ch == '=') {
      flush();
      tokens.push_back(std::string(1, ch));
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      cur += ch;
    }
  }
  flush();
  return tokens;
}

inline bool is_leaf_token(const std::string& t) {
  if (t.size() < 2 || t[0] != 'x') return false;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  return true;
}

class TermParser {
 public:
  explicit TermParser(std::vector<std::string> tokens)
      : tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const {
    if (done()) throw std::invalid_argument("term parse: unexpected end of input");
    return tokens_[pos_];
  }
  std::string next() {
    auto t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string& t) {
    auto got = next();
    if (got != t)
      throw std::invalid_argument("term parse: expected '" + t + "', got '" +
                                  got + "'");
  }

  Tree parse_term() {
    auto t = next();
    if (is_leaf_token(t)) {
      int label = std::stoi(t.substr(1));
      if (label < 1)
        throw std::invalid_argument("term parse: leaves are numbered from x1");
      return Tree::leaf(label - 1);
    }
    if (t != "(")
      throw std::invalid_argument("term parse: expected leaf or '(', got '" +
                                  t + "'");
    auto name = next();
    if (name == "(" || name == ")" || name == "+" || name == "*" ||
        name == "=" || is_leaf_token(name) ||
        std::isdigit(static_cast<unsigned char>(name[0])) || name[0] == '-')
      throw std::invalid_argument("term parse: bad generator name '" + name + "'");
    std::vector<Tree> children;
    while (peek() != ")") children.push_back(parse_term());
    expect(")");
    return Tree::node(name, std::move(children));
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

inline bool looks_like_scalar(const std::string& t) {
  return !t.empty() && !is_leaf_token(t) && t != "(" &&
         (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '-');
}

template <Field F>
TermCombo<F> parse_combo(const F& field, TermParser& p) {
  TermCombo<F> combo;
  while (true) {
    typename F::Elt coeff = field.one();
    if (looks_like_scalar(p.peek())) {
      coeff = field.parse(p.next());
      p.expect("*");
    }
    combo.terms.emplace_back(coeff, p.parse_term());
    if (p.done() || p.peek() != "+") break;
    p.next();
  }
  return combo;
}

}  // namespace detail

inline Tree parse_term(const std::string& src) {
  detail::TermParser p(detail::tokenize_term(src));
  Tree t = p.parse_term();
  if (!p.done())
    throw std::invalid_argument("term parse: trailing input after term");
  return t;
}

template <Field F>
TermCombo<F> parse_combo(const F& field, const std::string& src) {
  detail::TermParser p(detail::tokenize_term(src));
  auto combo = detail::parse_combo(field, p);
  if (!p.done())
    throw std::invalid_argument("term parse: trailing input after combination");
  return combo;
}

template <Field F>
Relation<F> parse_relation(const F& field, const std::string& src,
                           std::string label = "") {
  detail::TermParser p(detail::tokenize_term(src));
  Relation<F> rel;
  rel.label = std::move(label);
  rel.lhs = detail::parse_combo(field, p);
  p.expect("=");
  rel.rhs = detail::parse_combo(field, p);
  if (!p.done())
    throw std::invalid_argument("term parse: trailing input after relation");
  return rel;
}

// -- validation and evaluation ----------------------------------------

/// Arity of a term: number of leaves; the labels must be exactly
/// {x1, .., xn}, each once. Generator arities must match child counts.
template <Field F>
int validate_term(const OperadPresentation<F>& pres, const Tree& t) {
  struct Walk {
    const OperadPresentation<F>& pres;
    void check(const Tree& u) {
      if (u.is_leaf()) return;
      const auto& g = pres.generator(u.op());
      if (g.arity != static_cast<int>(u.children().size()))
        throw std::invalid_argument("term: generator '" + g.name + "' has arity " +
                                    std::to_string(g.arity) + ", got " +
                                    std::to_string(u.children().size()) +
                                    " arguments");
      for (const auto& c : u.children()) check(c);
    }
  };
  Walk{pres}.check(t);
  std::vector<int> leaves;
  t.planar_leaves(leaves);
  std::vector<bool> seen(leaves.size(), false);
  for (int l : leaves) {
    if (l < 0 || l >= static_cast<int>(leaves.size()) || seen[l])
      throw std::invalid_argument(
          "term: leaves must use x1..xn exactly once in " + t.to_string());
    seen[l] = true;
  }
  return static_cast<int>(leaves.size());
}

inline constexpr long kEvalDimBudget = 4096;

/// Evaluate a term against a structure assignment. Algebra mode gives a
/// map V^(x)n -> V, coalgebra mode V -> V^(x)n, where n is the arity.
template <Field F>
LinearMap<F> eval_term(const StructureAssignment<F>& s, const Tree& t) {
  const F& k = s.field;
  const int d = s.dim;
  std::vector<int> leaves;
  t.planar_leaves(leaves);
  long size = 1;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    size *= d;
    if (size > kEvalDimBudget)
      throw budget_error("eval_term: tensor power dimension exceeds budget");
  }

  struct Eval {
    const StructureAssignment<F>& s;
    LinearMap<F> planar(const Tree& u) const {
      const F& k = s.field;
      if (u.is_leaf()) return LinearMap<F>::identity(k, s.dim);
      auto it = s.maps.find(u.op());
      if (it == s.maps.end())
        throw std::invalid_argument("eval: no structure map for generator '" +
                                    u.op() + "'");
      const LinearMap<F>& g = it->second;
      LinearMap<F> args = LinearMap<F>::identity(k, 1);
      for (const auto& c : u.children()) args = tensor(args, planar(c));
      if (s.mode == StructureMode::algebra) {
        if (g.cod() != s.dim || g.dom() != args.cod())
          throw std::invalid_argument("eval: structure map for '" + u.op() +
                                      "' has wrong shape " + g.shape_string());
        return compose(g, args);
      }
      if (g.dom() != s.dim || g.cod() != args.dom())
        throw std::invalid_argument("eval: structure map for '" + u.op() +
                                    "' has wrong shape " + g.shape_string());
      return compose(args, g);
    }
  };
  LinearMap<F> planar = Eval{s}.planar(t);

  // Route input slot w[j] to planar position j (algebra) or planar
  // position j to output slot w[j] (coalgebra).
  Permutation w(leaves);
  if (s.mode == StructureMode::algebra)
    return compose(planar, perm_on_tensor_power(k, w.inverse(), d));
  return compose(perm_on_tensor_power(k, w, d), planar);
}

template <Field F>
LinearMap<F> eval_combo(const StructureAssignment<F>& s,
                        const TermCombo<F>& combo) {
  if (combo.terms.empty())
    throw std::invalid_argument("eval: empty term combination");
  LinearMap<F> acc = scale(combo.terms[0].first,
                           eval_term(s, combo.terms[0].second));
  for (std::size_t i = 1; i < combo.terms.size(); ++i) {
    LinearMap<F> next = scale(combo.terms[i].first,
                              eval_term(s, combo.terms[i].second));
    if (!acc.same_shape(next))
      throw std::invalid_argument("eval: mixed arities in term combination");
    acc = add(acc, next);
  }
  return acc;
}

/// Check every relation of the presentation against the assignment.
/// The report carries one finding per failed relation, with the rank of
/// the difference as a size measure of the failure.
template <Field F>
CheckReport check_relations(const OperadPresentation<F>& pres,
                            const StructureAssignment<F>& s) {
  CheckReport report;
  for (const auto& g : pres.generators) {
    auto it = s.maps.find(g.name);
    if (it == s.maps.end()) {
      report.fail("structure-missing-map", {}, g.name);
      continue;
    }
    int in = s.mode == StructureMode::algebra
                 ? static_cast<int>(detail::ipow(s.dim, g.arity))
                 : s.dim;
    int out = s.mode == StructureMode::algebra
                  ? s.dim
                  : static_cast<int>(detail::ipow(s.dim, g.arity));
    if (it->second.dom() != in || it->second.cod() != out)
      report.fail("structure-shape", {{"arity", g.arity}},
                  g.name + ": got " + it->second.shape_string());
  }
  if (!report.ok()) return report;
  for (std::size_t r = 0; r < pres.relations.size(); ++r) {
    const auto& rel = pres.relations[r];
    int na = -1;
    for (const auto* combo : {&rel.lhs, &rel.rhs})
      for (const auto& [c, t] : combo->terms) {
        int a = validate_term(pres, t);
        if (na < 0) na = a;
        if (a != na) {
          report.fail("relation-arity", {{"relation", static_cast<long>(r)}},
                      rel.label);
          return report;
        }
      }
    auto lhs = eval_combo(s, rel.lhs);
    auto rhs = eval_combo(s, rel.rhs);
    if (!(lhs == rhs))
      report.fail("relation", {{"relation", static_cast<long>(r)},
                               {"defect_rank", rank(sub(lhs, rhs))}},
                  rel.label);
  }
  return report;
}

}  // namespace opcheck
