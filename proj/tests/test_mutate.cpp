#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "rtlmut/hdl/emit.hpp"
#include "rtlmut/hdl/parser.hpp"
#include "rtlmut/mutate/mutate.hpp"
#include "rtlmut/mutate/tree.hpp"
#include "rtlmut/validate/validate.hpp"
#include "support/fixtures.hpp"

using namespace rtlmut;
using mutate::MutationCategory;
using mutate::EquivalenceCategory;
using testsupport::fixture;

namespace {

hdl::ModuleDecl parse_text(const std::string& text) {
  return hdl::parse({text, "test"});
}

size_t union_site_count(const hdl::ModuleDecl& m, MutationCategory cat) {
  size_t n = 0;
  for (const auto& v : mutate::variants_of(cat))
    n += mutate::enumerate_sites(m, {cat, v}).size();
  return n;
}

}  // namespace

TEST_CASE("site enumeration matches the operator's applicability") {
  // No always block: nothing to toggle.
  CHECK(union_site_count(fixture("inv").module, MutationCategory::BlockingNonblocking) == 0);
  // The counter's reset branch is a reset_logic_error site.
  CHECK(union_site_count(fixture("counter4").module, MutationCategory::ResetLogicError) >= 1);
  // Exactly one gate to swap in a single-AND module.
  CHECK(union_site_count(fixture("and2").module, MutationCategory::LogicGateSwap) == 1);
}

TEST_CASE("definitional rewrites") {
  SUBCASE("signal_inversion removes the inversion") {
    auto m = parse_text("module inv(input a, output y); assign y = ~a; endmodule");
    mutate::MutationOperator op{MutationCategory::SignalInversion, "drop_invert"};
    auto sites = mutate::enumerate_sites(m, op);
    REQUIRE(sites.size() == 1);
    auto res = mutate::apply_mutation(m, op, sites[0], 0);
    CHECK(res.record.before == "~a");
    CHECK(res.record.after == "a");
    CHECK(res.module.assigns[0].rhs.kind == hdl::ExprKind::Ref);
    CHECK(res.module.assigns[0].rhs.name == "a");
  }
  SUBCASE("condition_boundary relaxes the strict compare") {
    const auto& m = fixture("sat_counter4").module;
    mutate::MutationOperator op{MutationCategory::ConditionBoundary, "lt_le"};
    auto sites = mutate::enumerate_sites(m, op);
    REQUIRE(sites.size() == 1);
    auto res = mutate::apply_mutation(m, op, sites[0], 0);
    CHECK(res.record.before == "count < 4'hf");
    CHECK(res.record.after == "count <= 4'hf");
  }
  SUBCASE("off_by_one shifts a part-select window") {
    const auto& m = fixture("part_select").module;
    mutate::MutationOperator op{MutationCategory::OffByOneIndexing, "part_up"};
    auto sites = mutate::enumerate_sites(m, op);
    REQUIRE(!sites.empty());
    auto res = mutate::apply_mutation(m, op, sites[0], 0);
    CHECK(res.record.before == "data[3:0]");
    CHECK(res.record.after == "data[4:1]");
    // functionally different, confirmed by the validator
    validate::RandomStimulusConfig cfg;
    cfg.vectors = 200;
    auto report = validate::compare(m, res.module, cfg);
    CHECK(report.classification == validate::Classification::Mutated);
  }
}

TEST_CASE("every mutation category has at least one site somewhere in the corpus") {
  for (auto cat : mutate::all_mutation_categories()) {
    size_t total = 0;
    for (const auto& f : testsupport::corpus()) total += union_site_count(f.module, cat);
    CAPTURE(mutate::category_name(cat));
    CHECK(total >= 1);
  }
}

TEST_CASE("apply rejects a stale or foreign site") {
  const auto& m = fixture("and2").module;
  mutate::MutationOperator op{MutationCategory::LogicGateSwap, "and_or"};
  mutate::Site bogus{42, "assign[9].rhs"};
  CHECK_THROWS_AS(mutate::apply_mutation(m, op, bogus, 0), mutate::IllegalSiteError);
  mutate::Site wrong_path{0, "assign[1].rhs"};
  CHECK_THROWS_AS(mutate::apply_mutation(m, op, wrong_path, 0), mutate::IllegalSiteError);
  CHECK_THROWS_AS(mutate::apply_mutation(m, {MutationCategory::LogicGateSwap, "bogus"},
                                         mutate::Site{0, "assign[0].rhs"}, 0),
                  mutate::InapplicableError);
}

TEST_CASE("children still elaborate and differ structurally from the parent") {
  for (const auto& f : {fixture("counter4"), fixture("alu4"), fixture("lfsr8")}) {
    for (auto cat : mutate::all_mutation_categories()) {
      for (const auto& v : mutate::variants_of(cat)) {
        mutate::MutationOperator op{cat, v};
        auto sites = mutate::enumerate_sites(f.module, op);
        if (sites.empty()) continue;
        CAPTURE(f.name);
        CAPTURE(v);
        mutate::ApplyResult res;
        try {
          res = mutate::apply_mutation(f.module, op, sites[0], 7);
        } catch (const mutate::IllegalSiteError&) {
          continue;  // rewrite rolled back because the result would not elaborate
        }
        // syntactic closure: emitted child reparses to the same structure
        CHECK(hdl::parse(hdl::emit(res.module)) == res.module);
        CHECK(hdl::ast_fingerprint(res.module) != hdl::ast_fingerprint(f.module));
      }
    }
  }
}

TEST_CASE("replaying (operator, site, seed) reproduces the child exactly") {
  const auto& m = fixture("fsm_moore3").module;
  for (auto cat : {MutationCategory::FsmStateCorruption, MutationCategory::VariableSwapWithinLine,
                   MutationCategory::SensitivityListEdit}) {
    for (const auto& v : mutate::variants_of(cat)) {
      mutate::MutationOperator op{cat, v};
      auto sites = mutate::enumerate_sites(m, op);
      if (sites.empty()) continue;
      auto a = mutate::apply_mutation(m, op, sites.back(), 123);
      auto b = mutate::apply_mutation(m, op, sites.back(), 123);
      CHECK(a.module == b.module);
      CHECK(a.record.after == b.record.after);
      CHECK(a.record.seed == 123);
      CHECK(a.record.site == sites.back());
    }
  }
}

TEST_CASE("equivalence transforms validate clean where they apply") {
  validate::RandomStimulusConfig cfg;
  cfg.vectors = 300;
  SUBCASE("stylistic rename") {
    const auto& m = fixture("lfsr8").module;
    auto res = mutate::apply_equivalence(m, {EquivalenceCategory::Stylistic, "rename_nets"}, 5);
    auto report = validate::compare(m, res.module, cfg);
    CHECK(report.classification == validate::Classification::Clean);
    // suffix applied to internal nets
    bool found = false;
    for (const auto& n : res.module.nets) found |= n.name.find("_r") != std::string::npos;
    CHECK(found);
  }
  SUBCASE("mux if<->case restructuring") {
    const auto& m = fixture("mux2_if").module;
    auto res = mutate::apply_equivalence(m, {EquivalenceCategory::Implementation, "if_to_case"}, 2);
    CHECK(validate::compare(m, res.module, cfg).classification == validate::Classification::Clean);
    auto back =
        mutate::apply_equivalence(res.module, {EquivalenceCategory::Implementation, "case_to_if"}, 2);
    CHECK(validate::compare(m, back.module, cfg).classification == validate::Classification::Clean);
  }
  SUBCASE("De Morgan rewrite") {
    const auto& m = fixture("nand2").module;
    auto res = mutate::apply_equivalence(m, {EquivalenceCategory::Optimization, "demorgan"}, 3);
    CHECK(res.record.after.find("|") != std::string::npos);
    CHECK(validate::compare(m, res.module, cfg).classification == validate::Classification::Clean);
  }
  SUBCASE("assign/always restructuring") {
    const auto& m = fixture("parity8").module;
    auto res =
        mutate::apply_equivalence(m, {EquivalenceCategory::Architectural, "assign_to_always"}, 1);
    CHECK(validate::compare(m, res.module, cfg).classification == validate::Classification::Clean);
  }
  SUBCASE("inapplicable transform reports cleanly") {
    CHECK_THROWS_AS(mutate::apply_equivalence(fixture("inv").module,
                                              {EquivalenceCategory::Stylistic, "rename_nets"}, 0),
                    mutate::InapplicableError);
  }
}

TEST_CASE("bit_width_mismatch narrows only internal nets, never ports") {
  const auto& m = fixture("pipeline2").module;
  mutate::MutationOperator op{MutationCategory::BitWidthMismatch, "narrow_net"};
  auto sites = mutate::enumerate_sites(m, op);
  REQUIRE(!sites.empty());
  auto res = mutate::apply_mutation(m, op, sites[0], 0);
  CHECK(res.module.ports == m.ports);  // interface untouched
  CHECK(res.module.nets[0].width() == m.nets[0].width() - 1);
}

TEST_CASE("race_condition targets read-after-write NBA pairs") {
  auto sites = mutate::enumerate_sites(fixture("swap_regs").module,
                                       {MutationCategory::RaceCondition, "nba_to_blocking"});
  CHECK(sites.size() >= 2);  // both halves of the swap race
  // A register never read by another statement in its block is not a race
  // site (edge_detect's prev feeds a continuous assign outside the block).
  auto none = mutate::enumerate_sites(fixture("edge_detect").module,
                                      {MutationCategory::RaceCondition, "nba_to_blocking"});
  CHECK(none.empty());
}

TEST_CASE("operator pool enumerates all documented variants") {
  auto pool = mutate::full_operator_pool();
  CHECK(pool.size() >= 30);
  std::set<std::string> unique(pool.begin(), pool.end());
  CHECK(unique.size() == pool.size());
  for (const auto& entry : pool) CHECK(entry.find(':') != std::string::npos);
}
