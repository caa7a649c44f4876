#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "opcheck/algebra.hpp"
#include "opcheck/coalgebra.hpp"
#include "opcheck/io.hpp"
#include "opcheck/operad_builders.hpp"
#include "test_util.hpp"

using namespace opcheck;
using opcheck::io::json;
namespace fs = std::filesystem;

namespace {

fs::path repo_root() { return fs::path(__FILE__).parent_path().parent_path(); }

std::string cli() {
  const char* p = std::getenv("OPCHECK_BIN");
  return p ? p : "opcheck";
}

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs a shell command, captures stdout; stderr is discarded so error
// paths stay quiet. The exit code is the child's.
RunResult run_sh(const std::string& command) {
  RunResult r;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

RunResult run_cli(const std::string& args) { return run_sh(cli() + " " + args); }

fs::path scratch_dir() {
  auto dir = fs::temp_directory_path() / "opcheck_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_temp(const std::string& name, const std::string& content) {
  auto path = scratch_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string demo(const char* name) {
  return (repo_root() / "demos" / name).string();
}

}  // namespace

TEST_CASE("binary location is wired through the environment") {
  CHECK(std::getenv("OPCHECK_BIN") != nullptr);
}

TEST_CASE("version flag") {
  auto r = run_cli("--version");
  CHECK(r.code == 0);
  CHECK(r.out == "0.1.0\n");
}

TEST_CASE("operad build piped into operad check") {
  for (std::string args :
       {std::string("--kind unit"), std::string("--kind uassoc --N 3"),
        std::string("--kind coend --d 2 --N 2 --field Fp --p 2"),
        std::string("--kind end --d 2 --N 2")}) {
    auto r = run_sh(cli() + " operad build " + args + " | " + cli() +
                    " operad check -");
    INFO(args);
    CHECK(r.code == 0);
    CHECK(contains(r.out, "opcheck operad check"));
    CHECK(contains(r.out, "check operad-axioms: pass"));
    CHECK(contains(r.out, "summary: 1 checks, 0 failed"));
  }
}

TEST_CASE("operad build from an algebra file") {
  RationalField q;
  auto path = write_temp("dual.json",
                         io::algebra_to_json(dual_numbers(q)).dump());
  auto r = run_sh(cli() + " operad build --kind algebra --algebra " +
                  path.string() + " | " + cli() + " operad check -");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check operad-axioms: pass"));
}

TEST_CASE("failing operads exit 1 and name a witness") {
  RationalField q;
  json j = io::operad_to_json(build_uassoc_operad(q, 2));
  j["unit"][0] = "0";
  auto path = write_temp("bad_operad.json", j.dump());
  auto r = run_cli("operad check " + path.string());
  CHECK(r.code == 1);
  CHECK(contains(r.out, "check operad-axioms: fail"));
  CHECK(contains(r.out, "witness unit-zero"));
  CHECK(contains(r.out, "1 failed"));
}

TEST_CASE("coalgebra check") {
  RationalField q;
  LinearMap<RationalField> delta(q, 4, 2), eps(q, 1, 2);
  delta.at(0, 0) = q.one();
  delta.at(3, 1) = q.one();
  eps.at(0, 0) = q.one();
  eps.at(0, 1) = q.one();
  auto c = uassoc_coalgebra(q, 2, delta, eps);
  auto good = write_temp("grouplike.json", io::coalgebra_to_json(c).dump());
  auto r = run_cli("coalgebra check " + good.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check coalgebra-laws: pass"));

  json j = io::coalgebra_to_json(c);
  j["maps"][2]["entries"][1][0] = "1";
  auto bad = write_temp("grouplike_bad.json", j.dump());
  r = run_cli("coalgebra check " + bad.string());
  CHECK(r.code == 1);
  CHECK(contains(r.out, "check coalgebra-laws: fail"));
  CHECK(contains(r.out, "witness "));
}

TEST_CASE("presentation check against a structure") {
  PrimeField f2(2);
  auto model = build_field_model(2, 1);
  auto ins = build_ins_presentation(f2, 1, model.lambdas);
  auto st = model.assignment(ins);
  auto ppath = write_temp("ins_pres.json",
                          io::presentation_to_json(ins.presentation).dump());
  auto spath = write_temp("ins_struct.json", io::structure_to_json(st).dump());
  auto r = run_cli("presentation check " + ppath.string() + " --structure " +
                   spath.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check relations: pass"));
}

TEST_CASE("ins model honors the defining relations") {
  auto r = run_cli("ins model --p 2 --m 1");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check ins-relations: pass"));
  CHECK(contains(r.out, "field model F_2^2, 3 inverses"));
}

TEST_CASE("ins search text output") {
  auto r = run_cli("ins search --p 2 --d 1 --m 1");
  CHECK(r.code == 0);
  CHECK(r.out == "0 valid structures\n");

  r = run_cli("ins search --p 3 --d 1 --m 1");
  CHECK(r.code == 0);
  CHECK(r.out == "0 valid structures\n");

  r = run_cli("ins search --p 2 --d 1 --m 0");
  CHECK(r.code == 0);
  CHECK(r.out == "1 valid structures\n");
}

TEST_CASE("ins certify replays a triviality certificate") {
  auto r = run_cli("ins certify --structure " + demo("ins_candidate_d1m1.json"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check certificate-replay: pass"));
  CHECK(contains(r.out, "no nonzero coalgebra extends this data"));
}

TEST_CASE("sanity cofree on the unit algebra") {
  auto r = run_cli("sanity cofree --algebra " + demo("unit_algebra.json") +
                   " --x 3");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check cofree-carrier: pass"));
  CHECK(contains(r.out, "check counit-split: pass"));
  CHECK(contains(r.out, "counit split, section = id"));
}

TEST_CASE("sanity terminal") {
  auto r = run_cli("sanity terminal --operad " + demo("uassoc2_operad.json"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check terminal-laws: pass"));
  CHECK(contains(r.out, "check terminal-self: pass"));
  CHECK(contains(r.out, "terminal carrier P(0)* has dimension 1"));
}

TEST_CASE("sanity pointsum round trips a reduced coalgebra") {
  auto r = run_cli("sanity pointsum --operad " + demo("uassoc2_operad.json") +
                   " --reduced " + demo("reduced_primitive.json"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check pointed-structure: pass"));
  CHECK(contains(r.out, "check cokernel: pass"));
  CHECK(contains(r.out, "check round-trip: pass"));
  CHECK(contains(r.out, "check equivalence-iso: pass"));
  CHECK(contains(r.out, "summary: 4 checks, 0 failed"));
}

TEST_CASE("sanity composed on an arity-one operad") {
  auto r = run_cli("sanity composed --operad " + demo("module_dual_operad.json") +
                   " --x 1");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check composed-counit: pass"));
}

TEST_CASE("sanity propagate") {
  auto r = run_cli("sanity propagate --x 2");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check propagation-augmentation: pass"));
  CHECK(contains(r.out, "check propagation-unit-inclusion: pass"));

  r = run_cli("sanity propagate --x 2 --field Fp --p 5");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "summary: 2 checks, 0 failed"));
}

TEST_CASE("free algebra dimensions") {
  auto r = run_cli("free-algebra --operad " + demo("uassoc2_operad.json") +
                   " --x 1");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "check unit-injective: pass"));
  CHECK(contains(r.out,
                 "free algebra on 1 generators: arity dims [1,1,1], total 3"));
}

TEST_CASE("exit code 2 on malformed input") {
  auto r = run_sh("printf '{' | " + cli() + " operad check -");
  CHECK(r.code == 2);

  r = run_cli("operad check /nonexistent/file.json");
  CHECK(r.code == 2);

  r = run_cli("operad check");
  CHECK(r.code == 2);

  r = run_cli("no-such-command");
  CHECK(r.code == 2);

  auto bad = write_temp("bad_field.json", "{\"field\":{\"kind\":\"R\"}}");
  r = run_cli("operad check " + bad.string());
  CHECK(r.code == 2);
}

TEST_CASE("exit code 3 on budget") {
  auto r = run_cli("ins search --p 2 --d 3 --m 1");
  CHECK(r.code == 3);

  r = run_cli("--max-dim-product 10 operad build --kind coend --d 2 --N 3");
  CHECK(r.code == 3);

  // A roomier budget flag lets the same build through.
  r = run_cli("--max-dim-product 100 operad build --kind coend --d 2 --N 3");
  CHECK(r.code == 0);
}

TEST_CASE("json reports have the documented shape") {
  auto r = run_cli("--json --seed 42 operad check " +
                   demo("uassoc2_operad.json"));
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("version") == "0.1.0");
  CHECK(j.at("command") == "operad check");
  CHECK(j.at("seed") == 42);
  REQUIRE(j.at("inputs").is_object());
  std::string dg = j.at("inputs").at("operad").get<std::string>();
  CHECK(dg.size() == 16);
  CHECK(dg.find_first_not_of("0123456789abcdef") == std::string::npos);
  REQUIRE(j.at("checks").is_array());
  REQUIRE(j.at("checks").size() == 1);
  CHECK(j.at("checks")[0].at("name") == "operad-axioms");
  CHECK(j.at("checks")[0].at("status") == "pass");
  CHECK_FALSE(j.at("checks")[0].contains("witness"));
  CHECK_FALSE(j.contains("payload"));

  RationalField q;
  json bad = io::operad_to_json(build_uassoc_operad(q, 2));
  bad["unit"][0] = "0";
  auto path = write_temp("bad_operad2.json", bad.dump());
  r = run_cli("--json operad check " + path.string());
  CHECK(r.code == 1);
  j = json::parse(r.out);
  CHECK(j.at("seed") == 0);
  CHECK(j.at("checks")[0].at("status") == "fail");
  REQUIRE(j.at("checks")[0].contains("witness"));
  REQUIRE(j.at("checks")[0].at("witness").is_array());
  CHECK(j.at("checks")[0].at("witness").size() > 0);
  for (const auto& w : j.at("checks")[0].at("witness"))
    CHECK(w.contains("check"));
}

TEST_CASE("json search payload lists the structures found") {
  auto r = run_cli("--json ins search --p 2 --d 1 --m 0");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("command") == "ins search");
  CHECK(j.at("payload").at("p") == 2);
  CHECK(j.at("payload").at("d") == 1);
  CHECK(j.at("payload").at("m") == 0);
  CHECK(j.at("payload").at("candidates") == 4);
  CHECK(j.at("payload").at("count") == 1);
  REQUIRE(j.at("payload").at("structures").size() == 1);
  const auto& st = j.at("payload").at("structures")[0];
  CHECK(st.contains("delta"));
  CHECK(st.contains("eps"));
}

TEST_CASE("reports are byte-identical across runs and job counts") {
  std::string base = "--json --seed 7 ins search --p 2 --d 2 --m 1";
  auto a = run_cli("--jobs 1 " + base);
  auto b = run_cli("--jobs 1 " + base);
  auto c = run_cli("--jobs 4 " + base);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);

  auto d1 = run_cli("--json operad check " + demo("uassoc2_operad.json"));
  auto d2 = run_cli("--json operad check " + demo("uassoc2_operad.json"));
  CHECK(d1.out == d2.out);
}
