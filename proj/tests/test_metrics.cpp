#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtlmut/metrics/metrics.hpp"
#include "rtlmut/util/rng.hpp"
#include "support/fixtures.hpp"

using namespace rtlmut;
using namespace rtlmut::metrics;

namespace {

EvalRecord record(bool golden_pass, bool mutation_pass, CircuitType type = CircuitType::Sequential,
                  const std::string& category = "signal_inversion") {
  EvalRecord r;
  r.spec_id = "s";
  r.mutation_id = "m";
  r.category = category;
  r.circuit_type = type;
  r.golden_verdict.passed = golden_pass;
  r.mutation_verdict.passed = mutation_pass;
  return r;
}

}  // namespace

TEST_CASE("metric arithmetic") {
  SUBCASE("all pass, all detected") {
    std::vector<EvalRecord> rs(5, record(true, false));
    auto rep = compute_metrics(rs);
    CHECK(rep.m1 == 1.0);
    CHECK(rep.m2 == 1.0);
  }
  SUBCASE("golden failures zero both metrics regardless of mutants") {
    std::vector<EvalRecord> rs = {record(false, false), record(false, true)};
    auto rep = compute_metrics(rs);
    CHECK(rep.m1 == 0.0);
    CHECK(rep.m2 == 0.0);
  }
  SUBCASE("10 records: 4 golden-pass of which 3 detect") {
    std::vector<EvalRecord> rs;
    for (int i = 0; i < 3; ++i) rs.push_back(record(true, false));
    rs.push_back(record(true, true));
    for (int i = 0; i < 6; ++i) rs.push_back(record(false, true));
    auto rep = compute_metrics(rs);
    CHECK(rep.m1 == doctest::Approx(0.4));
    CHECK(rep.m2 == doctest::Approx(0.3));
  }
  SUBCASE("empty input is an error") {
    CHECK_THROWS_AS(compute_metrics({}), std::invalid_argument);
  }
}

TEST_CASE("m2 never exceeds m1") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EvalRecord> rs;
    size_t n = 1 + rng.next_below(20);
    for (size_t i = 0; i < n; ++i)
      rs.push_back(record(rng.next_below(2), rng.next_below(2),
                          rng.next_below(2) ? CircuitType::Sequential : CircuitType::Combinational));
    auto rep = compute_metrics(rs);
    CHECK(rep.m2 <= rep.m1);
    CHECK(rep.m1 <= 1.0);
    CHECK(rep.m2 >= 0.0);
    for (const auto& [type, m2] : rep.m2_by_type) CHECK(m2 <= rep.m1_by_type.at(type));
  }
}

TEST_CASE("structural classifier agrees with the corpus labels") {
  size_t agree = 0, total = 0;
  for (const auto& f : testsupport::corpus()) {
    ++total;
    auto got = circuit_type_name(classify_circuit(f.module));
    if (got == f.label) ++agree;
    CAPTURE(f.name);
    CHECK(got == f.label);
  }
  CHECK(total >= 20);
  CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.95);
}

TEST_CASE("classification examples") {
  CHECK(classify_circuit(testsupport::fixture("inv").module) == CircuitType::Combinational);
  CHECK(classify_circuit(testsupport::fixture("counter4").module) == CircuitType::Sequential);
  CHECK(classify_circuit(testsupport::fixture("mux2_if").module) == CircuitType::Combinational);
}

TEST_CASE("per-category breakdown counts detection over golden-pass records") {
  std::vector<EvalRecord> rs = {
      record(true, false, CircuitType::Sequential, "reset_logic_error"),
      record(true, true, CircuitType::Sequential, "reset_logic_error"),
      record(false, false, CircuitType::Sequential, "operator_swap"),
  };
  auto rep = compute_metrics(rs);
  CHECK(rep.by_category.at("reset_logic_error") == std::pair<uint32_t, uint32_t>{1, 2});
  CHECK(rep.by_category.at("operator_swap") == std::pair<uint32_t, uint32_t>{0, 1});
  auto table = report_table(rep);
  CHECK(table.find("reset_logic_error") != std::string::npos);
  CHECK(table.find("M1") != std::string::npos);
}

TEST_CASE("reports are deterministic over a fixed record set") {
  std::vector<EvalRecord> rs = {record(true, false), record(false, true),
                                record(true, true, CircuitType::Combinational)};
  auto a = compute_metrics(rs);
  auto b = compute_metrics(rs);
  CHECK(report_table(a) == report_table(b));
  CHECK(a.m1 == b.m1);
  CHECK(a.m2 == b.m2);
}
