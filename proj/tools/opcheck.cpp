#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "opcheck/algebra.hpp"
#include "opcheck/coalgebra.hpp"
#include "opcheck/field.hpp"
#include "opcheck/free_algebra.hpp"
#include "opcheck/ins.hpp"
#include "opcheck/io.hpp"
#include "opcheck/operad.hpp"
#include "opcheck/operad_builders.hpp"
#include "opcheck/presentation.hpp"
#include "opcheck/sanity.hpp"
#include "opcheck/version.hpp"

// Batch front-end: parse objects from files (or stdin with "-"), run the
// requested check suite, print a text or JSON report. Exit codes: 0 all
// checks pass, 1 check failures, 2 parse/validation errors, 3 budget
// exceeded. Reports are deterministic for fixed inputs, flags and --seed,
// independent of --jobs.

namespace {

using opcheck::io::json;

struct Options {
  bool json_out = false;
  long seed = 0;
  int jobs = 1;
  long max_dim_product = 1L << 24;
  long max_search = opcheck::kSearchBudget;
};

// Accumulates inputs, named check outcomes and a payload; renders once.
class Run {
 public:
  explicit Run(std::string command) : command_(std::move(command)) {}

  void add_input(const std::string& label, const std::string& content) {
    inputs_.emplace_back(label, opcheck::io::digest(content));
  }

  void add_check(const std::string& name, const opcheck::CheckReport& rep) {
    checks_.push_back({name, rep.ok() ? "pass" : "fail", rep});
  }

  void add_check(const std::string& name, bool ok, std::string note = "") {
    opcheck::CheckReport rep;
    if (!ok) rep.fail(name, {}, std::move(note));
    checks_.push_back({name, ok ? "pass" : "fail", rep});
  }

  json& payload() { return payload_; }

  /// Extra line printed in text mode only (JSON carries the payload).
  void note(std::string line) { notes_.push_back(std::move(line)); }

  bool all_pass() const {
    for (const auto& c : checks_)
      if (c.status == "fail") return false;
    return true;
  }

  int finish(const Options& opt) const {
    if (opt.json_out) {
      json j = json::object();
      j["version"] = opcheck::kVersion;
      j["command"] = command_;
      j["seed"] = opt.seed;
      json in = json::object();
      for (const auto& [label, dg] : inputs_) in[label] = dg;
      j["inputs"] = std::move(in);
      json checks = json::array();
      for (const auto& c : checks_) {
        json cj = json::object();
        cj["name"] = c.name;
        cj["status"] = c.status;
        if (!c.witness.ok()) {
          json w = json::array();
          for (const auto& f : c.witness.failures)
            w.push_back(opcheck::io::finding_to_json(f));
          cj["witness"] = std::move(w);
        }
        checks.push_back(std::move(cj));
      }
      j["checks"] = std::move(checks);
      if (!payload_.empty()) j["payload"] = payload_;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "opcheck " << command_ << "\n";
      for (const auto& [label, dg] : inputs_)
        std::cout << "input " << label << ": " << dg << "\n";
      for (const auto& c : checks_) {
        std::cout << "check " << c.name << ": " << c.status << "\n";
        for (const auto& f : c.witness.failures) {
          std::cout << "  witness " << f.check;
          for (const auto& [key, val] : f.where)
            std::cout << " " << key << "=" << val;
          if (!f.note.empty()) std::cout << " (" << f.note << ")";
          std::cout << "\n";
        }
      }
      for (const auto& line : notes_) std::cout << line << "\n";
      long failed = 0;
      for (const auto& c : checks_)
        if (c.status == "fail") ++failed;
      if (!checks_.empty())
        std::cout << "summary: " << checks_.size() << " checks, " << failed
                  << " failed\n";
    }
    return all_pass() ? 0 : 1;
  }

 private:
  struct Entry {
    std::string name, status;
    opcheck::CheckReport witness;
  };

  std::string command_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<Entry> checks_;
  json payload_ = json::object();
  std::vector<std::string> notes_;
};

opcheck::io::FieldDesc field_from_flags(const std::string& kind,
                                        std::uint32_t p) {
  if (kind == "Q") return {"Q", 0};
  return {"Fp", p};
}

/// Field descriptor embedded in a parsed JSON document.
opcheck::io::FieldDesc embedded_field(const json& j) {
  if (!j.is_object() || !j.contains("field"))
    throw opcheck::io::io_error("input: missing \"field\" descriptor");
  return opcheck::io::field_desc_from_json(j.at("field"));
}

// -- operad -----------------------------------------------------------

int cmd_operad_build(const std::string& kind, int n_arity, int d,
                     const std::string& algebra_file,
                     const opcheck::io::FieldDesc& fd, const Options& opt) {
  json out;
  if (kind == "algebra") {
    auto text = opcheck::io::read_input(algebra_file);
    auto aj = opcheck::io::parse_json(text, "algebra");
    out = opcheck::io::with_field(embedded_field(aj), [&](const auto& k) {
      auto a = opcheck::io::algebra_from_json(k, aj);
      return opcheck::io::operad_to_json(opcheck::build_algebra_operad(a));
    });
  } else {
    out = opcheck::io::with_field(fd, [&](const auto& k) {
      using F = std::decay_t<decltype(k)>;
      if (kind == "unit")
        return opcheck::io::operad_to_json(opcheck::build_unit_operad(k));
      if (kind == "uassoc")
        return opcheck::io::operad_to_json(
            opcheck::build_uassoc_operad(k, n_arity));
      long top = 1;
      for (int i = 0; i <= n_arity; ++i) {
        top *= d;
        if (top > opt.max_dim_product)
          throw opcheck::budget_error("operad build: d^(N+1) exceeds "
                                      "--max-dim-product");
      }
      if (kind == "coend")
        return opcheck::io::operad_to_json(
            opcheck::build_coend_operad(k, d, n_arity));
      return opcheck::io::operad_to_json(
          opcheck::build_end_operad<F>(k, d, n_arity));
    });
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_operad_check(const std::string& file, const Options& opt) {
  auto text = opcheck::io::read_input(file);
  auto j = opcheck::io::parse_json(text, "operad");
  Run run("operad check");
  run.add_input("operad", text);
  opcheck::io::with_field(embedded_field(j), [&](const auto& k) {
    auto p = opcheck::io::operad_from_json(k, j);
    run.add_check("operad-axioms", opcheck::check_operad_axioms(p));
    return 0;
  });
  return run.finish(opt);
}

// -- coalgebra ---------------------------------------------------------

int cmd_coalgebra_check(const std::string& file, const Options& opt) {
  auto text = opcheck::io::read_input(file);
  auto j = opcheck::io::parse_json(text, "coalgebra");
  if (!j.is_object() || !j.contains("operad"))
    throw opcheck::io::io_error("coalgebra: missing \"operad\"");
  Run run("coalgebra check");
  run.add_input("coalgebra", text);
  opcheck::io::with_field(embedded_field(j.at("operad")), [&](const auto& k) {
    auto c = opcheck::io::coalgebra_from_json(k, j);
    run.add_check("coalgebra-laws", opcheck::check_coalgebra(c));
    return 0;
  });
  return run.finish(opt);
}

// -- presentation --------------------------------------------------------

int cmd_presentation_check(const std::string& pres_file,
                           const std::string& struct_file,
                           const Options& opt) {
  auto ptext = opcheck::io::read_input(pres_file);
  auto stext = opcheck::io::read_input(struct_file);
  auto pj = opcheck::io::parse_json(ptext, "presentation");
  auto sj = opcheck::io::parse_json(stext, "structure");
  if (!(embedded_field(pj) == embedded_field(sj)))
    throw opcheck::io::io_error(
        "presentation check: presentation and structure fields differ");
  Run run("presentation check");
  run.add_input("presentation", ptext);
  run.add_input("structure", stext);
  opcheck::io::with_field(embedded_field(pj), [&](const auto& k) {
    auto pres = opcheck::io::presentation_from_json(k, pj);
    auto st = opcheck::io::structure_from_json(k, sj);
    run.add_check("relations", opcheck::check_relations(pres, st));
    return 0;
  });
  return run.finish(opt);
}

// -- ins -----------------------------------------------------------------

int cmd_ins_model(std::uint32_t p, int m, const Options& opt) {
  auto model = opcheck::build_field_model(p, m);
  opcheck::PrimeField f(p);
  auto ins = opcheck::build_ins_presentation(f, m, model.lambdas);
  auto st = model.assignment(ins);
  Run run("ins model");
  run.add_check("ins-relations",
                opcheck::check_relations(ins.presentation, st));
  run.payload()["p"] = p;
  run.payload()["m"] = m;
  run.payload()["modulus"] = json(model.modulus);
  run.payload()["lambda_count"] = model.lambdas.size();
  run.payload()["relation_count"] = ins.presentation.relations.size();
  run.note("field model F_" + std::to_string(p) + "^" + std::to_string(m + 1) +
           ", " + std::to_string(model.lambdas.size()) + " inverses");
  return run.finish(opt);
}

int cmd_ins_certify(const std::string& file, const Options& opt) {
  auto text = opcheck::io::read_input(file);
  auto j = opcheck::io::parse_json(text, "ins structure");
  Run run("ins certify");
  run.add_input("structure", text);
  opcheck::io::with_field(embedded_field(j), [&](const auto& k) {
    auto data = opcheck::io::ins_coalgebra_from_json(k, j);
    auto cert = opcheck::triviality_certificate(data);
    run.add_check("certificate-replay",
                  opcheck::verify_certificate(data, cert));
    run.payload()["certificate"] = opcheck::io::certificate_to_json(k, cert);
    run.note("no nonzero coalgebra extends this data: lambda = (" +
             opcheck::lambda_string(k, cert.lambda) + ") kills sigma");
    return 0;
  });
  return run.finish(opt);
}

int cmd_ins_search(std::uint32_t p, int d, int m, const Options& opt) {
  long digits = static_cast<long>(d) * d * d + (m + 1) * d;
  long total = 1;
  for (long i = 0; i < digits; ++i) {
    total *= p;
    if (total > opt.max_search)
      throw opcheck::budget_error("ins search: p^(d^3+(m+1)d) exceeds "
                                  "--max-search");
  }
  auto found = opcheck::brute_force_search(p, d, m, opt.jobs);
  if (!opt.json_out) {
    std::cout << found.size() << " valid structures\n";
    return 0;
  }
  Run run("ins search");
  run.payload()["p"] = p;
  run.payload()["d"] = d;
  run.payload()["m"] = m;
  run.payload()["candidates"] = total;
  run.payload()["count"] = found.size();
  json arr = json::array();
  for (const auto& st : found)
    arr.push_back(opcheck::io::ins_coalgebra_to_json(st));
  run.payload()["structures"] = std::move(arr);
  return run.finish(opt);
}

// -- sanity ----------------------------------------------------------------

int cmd_sanity_cofree(const std::string& algebra_file, int x,
                      const Options& opt) {
  auto text = opcheck::io::read_input(algebra_file);
  auto j = opcheck::io::parse_json(text, "algebra");
  Run run("sanity cofree");
  run.add_input("algebra", text);
  opcheck::io::with_field(embedded_field(j), [&](const auto& k) {
    using F = std::decay_t<decltype(k)>;
    auto a = opcheck::io::algebra_from_json(k, j);
    auto cf = opcheck::cofree_arity1(a, x);
    run.add_check("cofree-carrier", opcheck::check_coalgebra(cf.carrier));
    bool split = opcheck::counit_split_check(cf);
    run.add_check("counit-split", split, "no linear section found");
    run.payload()["carrier_dim"] = cf.carrier.dim;
    run.payload()["counit"] = opcheck::io::matrix_to_json(cf.counit);
    if (split) {
      run.payload()["section"] = opcheck::io::matrix_to_json(*cf.section);
      bool is_id = *cf.section == opcheck::LinearMap<F>::identity(k, x) &&
                   cf.counit == opcheck::LinearMap<F>::identity(k, x);
      run.note(is_id ? "counit split, section = id" : "counit split");
    }
    return 0;
  });
  return run.finish(opt);
}

int cmd_sanity_terminal(const std::string& operad_file, const Options& opt) {
  auto text = opcheck::io::read_input(operad_file);
  auto j = opcheck::io::parse_json(text, "operad");
  Run run("sanity terminal");
  run.add_input("operad", text);
  opcheck::io::with_field(embedded_field(j), [&](const auto& k) {
    auto p = opcheck::io::operad_from_json(k, j);
    auto t = opcheck::terminal_coalgebra(p);
    run.add_check("terminal-laws", opcheck::check_coalgebra(t));
    run.add_check("terminal-self", opcheck::terminality_check(t));
    run.payload()["coalgebra"] = opcheck::io::coalgebra_to_json(t);
    run.note("terminal carrier P(0)* has dimension " + std::to_string(t.dim));
    return 0;
  });
  return run.finish(opt);
}

int cmd_sanity_pointsum(const std::string& operad_file,
                        const std::string& reduced_file, const Options& opt) {
  auto ptext = opcheck::io::read_input(operad_file);
  auto rtext = opcheck::io::read_input(reduced_file);
  auto pj = opcheck::io::parse_json(ptext, "operad");
  auto rj = opcheck::io::parse_json(rtext, "coalgebra");
  if (!rj.is_object() || !rj.contains("operad"))
    throw opcheck::io::io_error("coalgebra: missing \"operad\"");
  if (!(embedded_field(pj) == embedded_field(rj.at("operad"))))
    throw opcheck::io::io_error(
        "sanity pointsum: operad and structure fields differ");
  Run run("sanity pointsum");
  run.add_input("operad", ptext);
  run.add_input("reduced", rtext);
  opcheck::io::with_field(embedded_field(pj), [&](const auto& k) {
    auto p = opcheck::io::operad_from_json(k, pj);
    auto vbar = opcheck::io::coalgebra_from_json(k, rj);
    auto pc = opcheck::point_sum(vbar, p);
    run.add_check("pointed-structure", opcheck::check_pointed(pc));
    auto red = opcheck::cokernel_reduction(pc);
    run.add_check("cokernel", red.report);
    bool round = red.reduced.has_value() && red.reduced->dim == vbar.dim &&
                 red.reduced->maps.size() == vbar.maps.size();
    if (round)
      for (std::size_t n = 0; n < vbar.maps.size(); ++n)
        round = round && red.reduced->maps[n] == vbar.maps[n];
    run.add_check("round-trip", round,
                  "cokernel of the point sum differs from the input");
    if (red.quotient) {
      auto iso = opcheck::pointed_equivalence_iso(pc, red);
      run.add_check("equivalence-iso",
                    opcheck::rank(iso) == pc.base.dim &&
                        iso.cod() == pc.base.dim,
                    "structure-plus-point map is not invertible");
    }
    run.payload()["pointed"] = opcheck::io::coalgebra_to_json(pc.base);
    run.payload()["pointing"] = opcheck::io::matrix_to_json(pc.pointing);
    return 0;
  });
  return run.finish(opt);
}

int cmd_sanity_composed(const std::string& operad_file, int x,
                        const Options& opt) {
  auto text = opcheck::io::read_input(operad_file);
  auto j = opcheck::io::parse_json(text, "operad");
  Run run("sanity composed");
  run.add_input("operad", text);
  opcheck::io::with_field(embedded_field(j), [&](const auto& k) {
    auto p = opcheck::io::operad_from_json(k, j);
    auto out = opcheck::composed_counit_check(p, x);
    run.add_check("composed-counit", out.report);
    run.payload()["gpx_dim"] = out.g_px.base.dim;
    run.payload()["projection"] = opcheck::io::matrix_to_json(out.projection);
    run.payload()["reduced_counit"] =
        opcheck::io::matrix_to_json(out.reduced_counit);
    run.payload()["counit"] = opcheck::io::matrix_to_json(out.counit);
    return 0;
  });
  return run.finish(opt);
}

int cmd_sanity_propagate(int x, const opcheck::io::FieldDesc& fd,
                         const Options& opt) {
  Run run("sanity propagate");
  opcheck::io::with_field(fd, [&](const auto& k) {
    using F = std::decay_t<decltype(k)>;
    auto dual = opcheck::dual_numbers(k);
    auto base = opcheck::scalar_algebra(k);
    // Augmentation K[e]/(e^2) -> K and the unit inclusion K -> K[e]/(e^2).
    opcheck::LinearMap<F> aug(k, 1, 2);
    aug.at(0, 0) = k.one();
    run.add_check("propagation-augmentation",
                  opcheck::propagation_check(dual, base, aug, x));
    run.add_check("propagation-unit-inclusion",
                  opcheck::propagation_check(base, dual, dual.unit_map(), x));
    return 0;
  });
  run.payload()["x"] = x;
  return run.finish(opt);
}

// -- free algebra -------------------------------------------------------------

int cmd_free_algebra(const std::string& operad_file, int x,
                     const Options& opt) {
  auto text = opcheck::io::read_input(operad_file);
  auto j = opcheck::io::parse_json(text, "operad");
  Run run("free-algebra");
  run.add_input("operad", text);
  opcheck::io::with_field(embedded_field(j), [&](const auto& k) {
    auto p = opcheck::io::operad_from_json(k, j);
    auto fa = opcheck::free_algebra(p, x);
    run.add_check("unit-injective", fa.unit_injective,
                  "X does not embed in the free algebra");
    run.payload()["arity_dims"] = json(fa.arity_dims);
    run.payload()["total_dim"] = fa.total_dim;
    std::string dims;
    for (std::size_t i = 0; i < fa.arity_dims.size(); ++i)
      dims += (i ? "," : "") + std::to_string(fa.arity_dims[i]);
    run.note("free algebra on " + std::to_string(x) +
             " generators: arity dims [" + dims + "], total " +
             std::to_string(fa.total_dim));
    return 0;
  });
  return run.finish(opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact checks for operads, coalgebras and their presentations"};
  app.set_version_flag("--version", opcheck::kVersion);
  app.require_subcommand(1);

  Options opt;
  app.add_flag("--json", opt.json_out, "emit the report as JSON");
  app.add_option("--seed", opt.seed,
                 "seed recorded in the report (checks are deterministic)");
  app.add_option("--jobs", opt.jobs, "worker threads for searches")
      ->envname("OPCHECK_JOBS")
      ->check(CLI::Range(1, 512));
  app.add_option("--max-dim-product", opt.max_dim_product,
                 "largest tensor dimension a build may allocate");
  app.add_option("--max-search", opt.max_search,
                 "largest candidate count a search may enumerate");

  // operad
  auto* operad = app.add_subcommand("operad", "build and check operads");
  operad->require_subcommand(1);
  operad->fallthrough();

  std::string build_kind;
  int build_n = 2, build_d = 1;
  std::string build_algebra;
  std::string field_kind = "Q";
  std::uint32_t field_p = 2;
  auto* ob = operad->add_subcommand("build", "emit a builder operad as JSON");
  ob->fallthrough();
  ob->add_option("--kind", build_kind, "unit|uassoc|algebra|coend|end")
      ->required()
      ->check(CLI::IsMember({"unit", "uassoc", "algebra", "coend", "end"}));
  ob->add_option("--N", build_n, "truncation arity");
  ob->add_option("--d", build_d, "dimension of V for coend/end");
  ob->add_option("--algebra", build_algebra, "algebra JSON for --kind algebra");
  ob->add_option("--field", field_kind, "Q|Fp")
      ->check(CLI::IsMember({"Q", "Fp"}));
  ob->add_option("--p", field_p, "prime for --field Fp");

  std::string check_file;
  auto* oc = operad->add_subcommand("check", "verify the operad axioms");
  oc->fallthrough();
  oc->add_option("file", check_file, "operad JSON ('-' for stdin)")
      ->required();

  // coalgebra
  auto* coalg = app.add_subcommand("coalgebra", "check coalgebra structures");
  coalg->require_subcommand(1);
  coalg->fallthrough();
  std::string coalg_file;
  auto* cc = coalg->add_subcommand("check", "verify the coalgebra laws");
  cc->fallthrough();
  cc->add_option("file", coalg_file, "coalgebra JSON ('-' for stdin)")
      ->required();

  // presentation
  auto* pres = app.add_subcommand("presentation",
                                  "check generators-and-relations data");
  pres->require_subcommand(1);
  pres->fallthrough();
  std::string pres_file, pres_struct;
  auto* pc = pres->add_subcommand("check", "evaluate relations on a structure");
  pc->fallthrough();
  pc->add_option("file", pres_file, "presentation JSON ('-' for stdin)")
      ->required();
  pc->add_option("--structure", pres_struct, "structure assignment JSON")
      ->required();

  // ins
  auto* ins = app.add_subcommand("ins", "the inverse-extended operad");
  ins->require_subcommand(1);
  ins->fallthrough();

  std::uint32_t ins_p = 2;
  int ins_m = 1, ins_d = 1;
  auto* im = ins->add_subcommand("model",
                                 "field-extension algebra vs the relations");
  im->fallthrough();
  im->add_option("--p", ins_p, "prime")->required();
  im->add_option("--m", ins_m, "top nullary index")->required();

  std::string ins_struct;
  auto* icert = ins->add_subcommand("certify",
                                    "emit a triviality certificate");
  icert->fallthrough();
  icert->add_option("--structure", ins_struct, "candidate structure JSON")
      ->required();

  auto* isearch = ins->add_subcommand("search",
                                      "enumerate candidate structures");
  isearch->fallthrough();
  isearch->add_option("--p", ins_p, "prime")->required();
  isearch->add_option("--d", ins_d, "dim V")->required();
  isearch->add_option("--m", ins_m, "top nullary index")->required();

  // sanity
  auto* sanity = app.add_subcommand("sanity",
                                    "cofree, terminal and pointed checks");
  sanity->require_subcommand(1);
  sanity->fallthrough();

  std::string san_algebra;
  int san_x = 1;
  auto* sc = sanity->add_subcommand("cofree", "cofree coalgebra on X");
  sc->fallthrough();
  sc->add_option("--algebra", san_algebra, "algebra JSON")->required();
  sc->add_option("--x", san_x, "dim X")->required();

  std::string san_operad;
  auto* st = sanity->add_subcommand("terminal", "terminal coalgebra P(0)*");
  st->fallthrough();
  st->add_option("--operad", san_operad, "operad JSON")->required();

  std::string san_reduced;
  auto* sp = sanity->add_subcommand("pointsum",
                                    "point a reduced coalgebra and back");
  sp->fallthrough();
  sp->add_option("--operad", san_operad, "operad JSON")->required();
  sp->add_option("--reduced", san_reduced, "coalgebra JSON over the reduced part")
      ->required();

  auto* scomp = sanity->add_subcommand("composed",
                                       "counit factorization for arity <= 1");
  scomp->fallthrough();
  scomp->add_option("--operad", san_operad, "operad JSON")->required();
  scomp->add_option("--x", san_x, "dim X")->required();

  auto* sprop = sanity->add_subcommand("propagate",
                                       "built-in propagation examples");
  sprop->fallthrough();
  sprop->add_option("--x", san_x, "dim X");
  sprop->add_option("--field", field_kind, "Q|Fp")
      ->check(CLI::IsMember({"Q", "Fp"}));
  sprop->add_option("--p", field_p, "prime for --field Fp");

  // free-algebra
  auto* fa = app.add_subcommand("free-algebra",
                                "graded dimensions of the free algebra");
  fa->fallthrough();
  std::string fa_operad;
  int fa_x = 1;
  fa->add_option("--operad", fa_operad, "operad JSON")->required();
  fa->add_option("--x", fa_x, "number of generators")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (ob->parsed())
      return cmd_operad_build(build_kind, build_n, build_d, build_algebra,
                              field_from_flags(field_kind, field_p), opt);
    if (oc->parsed()) return cmd_operad_check(check_file, opt);
    if (cc->parsed()) return cmd_coalgebra_check(coalg_file, opt);
    if (pc->parsed()) return cmd_presentation_check(pres_file, pres_struct, opt);
    if (im->parsed()) return cmd_ins_model(ins_p, ins_m, opt);
    if (icert->parsed()) return cmd_ins_certify(ins_struct, opt);
    if (isearch->parsed()) return cmd_ins_search(ins_p, ins_d, ins_m, opt);
    if (sc->parsed()) return cmd_sanity_cofree(san_algebra, san_x, opt);
    if (st->parsed()) return cmd_sanity_terminal(san_operad, opt);
    if (sp->parsed()) return cmd_sanity_pointsum(san_operad, san_reduced, opt);
    if (scomp->parsed()) return cmd_sanity_composed(san_operad, san_x, opt);
    if (sprop->parsed())
      return cmd_sanity_propagate(san_x, field_from_flags(field_kind, field_p),
                                  opt);
    if (fa->parsed()) return cmd_free_algebra(fa_operad, fa_x, opt);
  } catch (const opcheck::budget_error& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
