#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtlmut/hdl/parser.hpp"
#include "rtlmut/hdl/walk.hpp"
#include "rtlmut/mutate/mutate.hpp"
#include "rtlmut/validate/validate.hpp"
#include "support/fixtures.hpp"

using namespace rtlmut;
using testsupport::fixture;
using validate::Classification;

namespace {

hdl::ModuleDecl parse_text(const std::string& text) {
  return hdl::parse({text, "test"});
}

// Exhaustively drives every input sequence of `cycles` steps over all input
// bits and reports whether any output ever differs. Exponential, so only for
// tiny fixtures; this is the ground truth the random comparator is checked
// against.
bool exhaustive_differs(const hdl::ModuleDecl& golden, const hdl::ModuleDecl& candidate,
                        uint32_t cycles) {
  std::vector<std::pair<std::string, uint32_t>> inputs;
  uint32_t bits = 0;
  auto clock = hdl::find_clock_port(golden.ports);
  for (const auto& p : golden.ports) {
    if (p.dir != hdl::Direction::Input) continue;
    if (clock && p.name == *clock) continue;
    inputs.emplace_back(p.name, p.width());
    bits += p.width();
  }
  uint32_t total_bits = bits * cycles;
  REQUIRE(total_bits <= 16);
  sim::SimModel mg(golden), mc(candidate);
  for (uint64_t word = 0; word < (1ULL << total_bits); ++word) {
    sim::StimulusProgram prog;
    prog.clock = clock;
    uint64_t rest = word;
    for (uint32_t c = 0; c < cycles; ++c) {
      sim::Step s;
      for (const auto& [name, w] : inputs) {
        s.drives[name] = hdl::BitVec(w, rest & hdl::BitVec::mask(w));
        rest >>= w;
      }
      prog.steps.push_back(std::move(s));
    }
    if (sim::run_capture(mg, prog) != sim::run_capture(mc, prog)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("random programs are deterministic in (seed, index)") {
  validate::RandomStimulusConfig cfg;
  cfg.seed = 11;
  const auto& ports = fixture("counter4").module.ports;
  auto a = validate::gen_random_program(ports, cfg, 3);
  auto b = validate::gen_random_program(ports, cfg, 3);
  CHECK(a == b);
  auto c = validate::gen_random_program(ports, cfg, 4);
  CHECK(a != c);
}

TEST_CASE("reset handling in generated programs") {
  validate::RandomStimulusConfig cfg;
  cfg.reset_toggle_probability = 0.0;
  cfg.cycles_per_vector = 32;
  auto prog = validate::gen_random_program(fixture("counter4").module.ports, cfg, 0);
  REQUIRE(prog.reset.has_value());
  CHECK(prog.reset->signal == "rst_n");
  CHECK(prog.reset->active_low);
  // active on cycle 0, inactive forever after with probability 0
  CHECK(prog.steps[0].drives.at("rst_n").bits == 0);
  for (size_t i = 1; i < prog.steps.size(); ++i) CHECK(prog.steps[i].drives.at("rst_n").bits == 1);
  // every input driven every cycle
  for (const auto& s : prog.steps) {
    CHECK(s.drives.count("en"));
    CHECK(!s.drives.count("clk"));  // the clock is owned by the runner
    CHECK(s.expect.empty());
  }
}

TEST_CASE("uniform drive values have the expected mean") {
  validate::RandomStimulusConfig cfg;
  cfg.seed = 99;
  cfg.cycles_per_vector = 1;
  const auto& ports = fixture("inv").module.ports;
  double sum = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    auto prog = validate::gen_random_program(ports, cfg, static_cast<uint64_t>(i));
    sum += static_cast<double>(prog.steps[0].drives.at("a").bits);
  }
  double mean = sum / n;
  CHECK(mean > 0.45);
  CHECK(mean < 0.55);
}

TEST_CASE("compare is reflexively clean on the corpus") {
  validate::RandomStimulusConfig cfg;
  cfg.vectors = 64;
  for (const auto& f : testsupport::corpus()) {
    CAPTURE(f.name);
    auto report = validate::compare(f.module, f.module, cfg);
    CHECK(report.classification == Classification::Clean);
    CHECK(report.mismatches == 0);
    CHECK(report.vectors_run == 64);
  }
}

TEST_CASE("inverted inverter differs on every cycle") {
  auto mutant = parse_text("module inv(input a, output y); assign y = a; endmodule");
  validate::RandomStimulusConfig cfg;
  cfg.vectors = 100;
  cfg.mismatch_cap = 0;
  auto report = validate::compare(fixture("inv").module, mutant, cfg);
  CHECK(report.classification == Classification::Mutated);
  CHECK(report.mismatches ==
        static_cast<uint64_t>(report.vectors_run) * cfg.cycles_per_vector);
  REQUIRE(report.first_mismatch.has_value());
  CHECK(report.first_mismatch->vector == 0);
  CHECK(report.first_mismatch->cycle == 0);
  CHECK(report.first_mismatch->output == "y");
}

TEST_CASE("mismatch cap stops early and is recorded") {
  auto mutant = parse_text("module inv(input a, output y); assign y = a; endmodule");
  validate::RandomStimulusConfig cfg;
  cfg.vectors = 100;
  cfg.mismatch_cap = 8;
  auto report = validate::compare(fixture("inv").module, mutant, cfg);
  CHECK(report.capped);
  CHECK(report.vectors_run < 100);
  CHECK(report.mismatches >= 8);
}

TEST_CASE("reset_logic_error mutant agrees with exhaustive enumeration") {
  const auto& golden = fixture("toggle_ff").module;  // inputs: clk, rst, t -> 2 free bits
  mutate::MutationOperator op{mutate::MutationCategory::ResetLogicError, "drop_branch"};
  auto sites = mutate::enumerate_sites(golden, op);
  REQUIRE(!sites.empty());
  auto mutant = mutate::apply_mutation(golden, op, sites[0], 3).module;

  bool truth = exhaustive_differs(golden, mutant, 4);
  validate::RandomStimulusConfig cfg;
  cfg.vectors = 2000;
  cfg.reset_toggle_probability = 0.1;
  auto report = validate::compare(golden, mutant, cfg);
  CHECK(truth == (report.classification == Classification::Mutated));
  CHECK(report.classification == Classification::Mutated);
  CHECK(report.mismatches > 0);
}

TEST_CASE("equivalence agrees with exhaustive truth tables on small designs") {
  for (const auto& name : {"and2", "mux2", "nand2", "comparator4"}) {
    const auto& f = fixture(name);
    for (auto cat : mutate::all_equivalence_categories()) {
      for (const auto& v : mutate::variants_of(cat)) {
        mutate::EquivalenceTransform t{cat, v};
        auto sites = mutate::enumerate_sites(f.module, t);
        if (sites.empty()) continue;
        CAPTURE(name);
        CAPTURE(v);
        auto res = mutate::apply_equivalence_at(f.module, t, sites[0], 17);
        bool truth = exhaustive_differs(f.module, res.module, 1);
        CHECK(!truth);
        validate::RandomStimulusConfig cfg;
        cfg.vectors = 300;
        auto report = validate::compare(f.module, res.module, cfg);
        CHECK(report.classification == Classification::Clean);
      }
    }
  }
}

TEST_CASE("mutated classification is monotone in vector count") {
  auto mutant = parse_text("module inv(input a, output y); assign y = a; endmodule");
  validate::RandomStimulusConfig cfg;
  cfg.vectors = 10;
  cfg.seed = 5;
  auto small = validate::compare(fixture("inv").module, mutant, cfg);
  REQUIRE(small.classification == Classification::Mutated);
  cfg.vectors = 500;
  auto big = validate::compare(fixture("inv").module, mutant, cfg);
  CHECK(big.classification == Classification::Mutated);
  // prefix stability: the same first mismatch is found
  CHECK(small.first_mismatch->vector == big.first_mismatch->vector);
  CHECK(small.first_mismatch->cycle == big.first_mismatch->cycle);
}

TEST_CASE("reports are identical across runs and thread counts, serial included") {
  const auto& golden = fixture("lfsr8").module;
  mutate::MutationOperator op{mutate::MutationCategory::LogicGateSwap, "xor_swap"};
  auto sites = mutate::enumerate_sites(golden, op);
  REQUIRE(!sites.empty());
  auto mutant = mutate::apply_mutation(golden, op, sites[0], 1).module;
  validate::RandomStimulusConfig cfg;
  cfg.vectors = 400;
  cfg.mismatch_cap = 0;
  sim::SimModel mg(golden), mc(mutant);
  auto serial = validate::compare_serial(mg, mc, cfg);
  auto t1 = validate::compare(mg, mc, cfg, 1);
  auto t4 = validate::compare(mg, mc, cfg, 4);
  auto t8 = validate::compare(mg, mc, cfg, 8);
  CHECK(serial == t1);
  CHECK(serial == t4);
  CHECK(serial == t8);
  auto again = validate::compare(mg, mc, cfg, 4);
  CHECK(again == t4);
}

TEST_CASE("oscillating candidate is classified mutated with a flag") {
  auto golden = fixture("inv").module;
  auto osc = parse_text("module inv(input a, output y); wire l; assign l = ~l; assign y = a ^ l; endmodule");
  validate::RandomStimulusConfig cfg;
  cfg.vectors = 10;
  auto report = validate::compare(golden, osc, cfg);
  CHECK(report.oscillation);
  CHECK(report.classification == Classification::Mutated);
}

TEST_CASE("interface mismatch is an error") {
  CHECK_THROWS_AS(validate::compare(fixture("inv").module, fixture("and2").module,
                                    validate::RandomStimulusConfig{}),
                  sim::InterfaceError);
}
