#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rtlmut/cli/cli.hpp"
#include "rtlmut/store/manifest.hpp"
#include "support/fixtures.hpp"

using namespace rtlmut;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv;
  argv.push_back("rtlmut");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("rtlmut_cli_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto p = temp_path(name);
  std::ofstream f(p, std::ios::binary);
  f << content;
  return p;
}

std::vector<double> parse_floats(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

}  // namespace

TEST_CASE("unknown subcommand prints usage and fails") {
  auto r = run_cli({"frobnicate"});
  CHECK(r.code != 0);
  CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("help exits zero") {
  auto r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("advantage") != std::string::npos);
}

TEST_CASE("parse reports structure and fails on bad input") {
  auto ok = run_cli({"parse", testsupport::fixture_path("counter4.v")});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("module counter4") != std::string::npos);

  auto bad_file = write_temp("bad.v", "module bad(input a, output y); assign y = x; endmodule");
  auto bad = run_cli({"parse", bad_file});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("unresolved identifier") != std::string::npos);

  auto fp1 = run_cli({"parse", testsupport::fixture_path("counter4.v"), "--fingerprint"});
  auto fp2 = run_cli({"parse", testsupport::fixture_path("counter4.v"), "--fingerprint"});
  CHECK(fp1.out == fp2.out);
  CHECK(fp1.out.size() == 17);  // 16 hex chars + newline
}

TEST_CASE("advantage subcommand reproduces the published anchors") {
  auto case1 = write_temp("case1.txt", "1 1 1 1 1 2 1 1\n");
  auto loo = run_cli({"advantage", "--method", "loo", "--input", case1});
  REQUIRE(loo.code == 0);
  auto a = parse_floats(loo.out);
  REQUIRE(a.size() == 8);
  CHECK(a[5] == doctest::Approx(1.0).epsilon(0.01));
  for (size_t i : {0, 1, 2, 3, 4, 6, 7}) CHECK(a[i] == doctest::Approx(-0.38).epsilon(0.03));

  auto case2 = write_temp("case2.txt", "[1, 1, 1, 1, 1, 2, 0.8, 1]\n");
  auto loo2 = run_cli({"advantage", "--method", "loo", "--input", case2});
  auto b = parse_floats(loo2.out);
  REQUIRE(b.size() == 8);
  CHECK(b[5] == doctest::Approx(13.61).epsilon(0.002));
  CHECK(b[6] == doctest::Approx(-0.91).epsilon(0.02));

  auto smu = run_cli({"advantage", "--method", "smu", "--input", case1});
  auto c = parse_floats(smu.out);
  CHECK(c[5] == doctest::Approx(2.83).epsilon(0.004));

  auto bad = run_cli({"advantage", "--method", "banana", "--input", case1});
  CHECK(bad.code != 0);
}

TEST_CASE("reward compute from a JSON file") {
  auto input = write_temp("reward.json", R"({
    "golden_passed": true,
    "mutations_failed": [true, true, false, false],
    "judge_ok": true,
    "plan_text": "clean ascii plan"
  })");
  auto r = run_cli({"reward", "compute", "--input", input});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["total"] == 2.5);
  CHECK(j["r_m"] == 0.5);
}

TEST_CASE("validate subcommand compares two files") {
  auto mutant = write_temp("inv_mut.v", "module inv(input a, output y); assign y = a; endmodule");
  auto r = run_cli({"validate", "--golden", testsupport::fixture_path("inv.v"), "--candidate",
                    mutant, "--vectors", "50", "--seed", "3"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["classification"] == "mutated");
  CHECK(j["mismatches"].get<uint64_t>() > 0);
  CHECK(j.contains("config_fingerprint"));

  auto clean = run_cli({"validate", "--golden", testsupport::fixture_path("inv.v"), "--candidate",
                        testsupport::fixture_path("inv.v"), "--vectors", "50"});
  auto jc = nlohmann::json::parse(clean.out);
  CHECK(jc["classification"] == "clean");
}

TEST_CASE("mutate and equiv subcommands emit rewritten designs") {
  auto out_v = temp_path("mutated.v");
  auto r = run_cli({"mutate", testsupport::fixture_path("and2.v"), "--category",
                    "logic_gate_swap", "--variant", "and_or", "--site", "0", "-o", out_v});
  REQUIRE(r.code == 0);
  std::ifstream f(out_v);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().find("a | b") != std::string::npos);

  auto list = run_cli({"mutate", testsupport::fixture_path("and2.v"), "--category",
                       "logic_gate_swap"});
  CHECK(list.out.find("and_or: 1 sites") != std::string::npos);

  auto eq = run_cli({"equiv", testsupport::fixture_path("nand2.v"), "--category", "optimization",
                     "--variant", "demorgan"});
  REQUIRE(eq.code == 0);
  CHECK(eq.out.find("~a | ~b") != std::string::npos);
}

TEST_CASE("tree build / stats / replay round trip") {
  auto out = temp_path("tree.jsonl");
  auto build = run_cli({"tree", "build", "--golden", testsupport::fixture_path("counter4.v"),
                        "--n-equivalents", "1", "--n1", "1", "--seed", "7", "--vectors", "64",
                        "-o", out});
  REQUIRE(build.code == 0);
  CHECK(build.out.find("tree written") != std::string::npos);

  auto manifest = store::read_manifest(out);
  CHECK(manifest.record_type == "tree_node");
  CHECK(manifest.header_extra.contains("config_fingerprint"));
  CHECK(manifest.records.size() >= 2);

  auto stats = run_cli({"tree", "stats", out});
  REQUIRE(stats.code == 0);
  auto js = nlohmann::json::parse(stats.out);
  CHECK(js["golden"] == 1);

  auto replay = run_cli({"tree", "replay", out, "--golden",
                         testsupport::fixture_path("counter4.v")});
  REQUIRE(replay.code == 0);
  CHECK(replay.out.find("replay ok") != std::string::npos);

  // a different golden makes replay fail
  auto wrong = run_cli({"tree", "replay", out, "--golden",
                        testsupport::fixture_path("alu4.v")});
  CHECK(wrong.code != 0);
}

TEST_CASE("sim subcommand runs a program file") {
  auto prog = write_temp("prog.json", R"({
    "schema": "rtlmut.stimulus.v1",
    "steps": [{"drive": {"a": 0}, "expect": {"y": 1}}]
  })");
  auto r = run_cli({"sim", testsupport::fixture_path("inv.v"), "--program", prog});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == true);

  auto trace = run_cli({"sim", testsupport::fixture_path("inv.v"), "--program", prog, "--trace"});
  CHECK(trace.out.find("step 0") != std::string::npos);

  auto failing = write_temp("prog_bad.json", R"({
    "schema": "rtlmut.stimulus.v1",
    "steps": [{"drive": {"a": 0}, "expect": {"y": 0}}]
  })");
  auto bad = run_cli({"sim", testsupport::fixture_path("inv.v"), "--program", failing});
  CHECK(bad.code == 1);
}

TEST_CASE("pipeline eval + metrics report through files") {
  // Build a one-spec manifest with three mutations.
  auto tree_path = temp_path("pipe_tree.jsonl");
  REQUIRE(run_cli({"tree", "build", "--golden", testsupport::fixture_path("counter4.v"),
                   "--n-equivalents", "0", "--n1", "3", "--seed", "3", "--vectors", "64", "-o",
                   tree_path})
              .code == 0);
  auto tree_manifest = store::read_manifest(tree_path);
  nlohmann::json mutations = nlohmann::json::array();
  for (const auto& rec : tree_manifest.records)
    if (rec["kind"] == "mutation") mutations.push_back(rec);
  REQUIRE(mutations.size() == 3);

  std::ifstream gf(testsupport::fixture_path("counter4.v"));
  std::stringstream gss;
  gss << gf.rdbuf();
  store::Manifest specs;
  specs.record_type = "spec_record";
  specs.records.push_back(nlohmann::json{
      {"id", "counter4"},
      {"description",
       "counter4: 4-bit up-counter with enable and asynchronous active-low reset."},
      {"golden", gss.str()},
      {"mutations", mutations}});
  auto specs_path = temp_path("specs.jsonl");
  store::write_manifest(specs_path, specs);

  auto mock_path = write_temp("mock.json", R"([
    {"match": "any", "plan": "Difference: reset may be broken.\nStimuli: reset then count three cycles then reset again.\nExpected Outputs: 0 then 1 then 3 then 0.\nReasoning: exercises reset and increment paths."},
    {"match": "any", "program": "{\"schema\": \"rtlmut.stimulus.v1\", \"clock\": \"clk\", \"steps\": [{\"drive\": {\"rst_n\": 0, \"en\": 0}, \"ticks\": 1, \"expect\": {\"count\": 0}}, {\"drive\": {\"rst_n\": 1, \"en\": 1}, \"ticks\": 3, \"expect\": {\"count\": 3}}, {\"drive\": {\"rst_n\": 0, \"en\": 0}, \"ticks\": 1, \"expect\": {\"count\": 0}}]}"}
  ])");

  auto records_path = temp_path("records.jsonl");
  auto eval = run_cli({"pipeline", "eval", "--specs", specs_path, "--mock", mock_path, "-o",
                       records_path});
  REQUIRE(eval.code == 0);

  auto report = run_cli({"metrics", "report", records_path});
  REQUIRE(report.code == 0);
  CHECK(report.out.find("M1 golden pass") != std::string::npos);
  CHECK(report.out.find("100.00%") != std::string::npos);  // golden passes on all 3 records

  auto curated_path = temp_path("pairs.jsonl");
  auto curate = run_cli({"pipeline", "curate", "--specs", specs_path, "--mock", mock_path, "-o",
                         curated_path});
  REQUIRE(curate.code == 0);
  auto pairs = store::read_manifest(curated_path);
  CHECK(pairs.record_type == "sft_pair");

  // cross-check: accepted pairs equal the M2-true records
  auto recs = store::read_manifest(records_path);
  size_t m2 = 0;
  for (const auto& r : recs.records)
    if (r["golden_verdict"]["passed"] == true && r["mutation_verdict"]["passed"] == false) ++m2;
  CHECK(pairs.records.size() == m2);
}

TEST_CASE("metrics report rejects a wrong manifest type") {
  store::Manifest m;
  m.record_type = "tree_node";
  auto p = temp_path("wrongtype.jsonl");
  store::write_manifest(p, m);
  auto r = run_cli({"metrics", "report", p});
  CHECK(r.code == 1);
}
