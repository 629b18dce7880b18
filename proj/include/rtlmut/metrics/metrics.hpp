#pragma once

#include <map>
#include <string>
#include <vector>

#include "rtlmut/hdl/ast.hpp"
#include "rtlmut/reward/reward.hpp"
#include "rtlmut/sim/stimulus.hpp"

namespace rtlmut::metrics {

enum class CircuitType { Combinational, Sequential };

std::string circuit_type_name(CircuitType t);

// Structural classification: sequential iff any always block carries an edge
// trigger. Exact for this HDL subset, no voting needed.
CircuitType classify_circuit(const hdl::ModuleDecl& m);

// One (spec, mutation) evaluation unit. The stimulus also ran against every
// sibling mutation for the reward's r_m term; this record keeps the verdict
// of its own target mutation.
struct EvalRecord {
  std::string spec_id;
  std::string mutation_id;
  std::string category;  // mutation category of the target, "" if unknown
  CircuitType circuit_type = CircuitType::Combinational;
  sim::Verdict golden_verdict;
  sim::Verdict mutation_verdict;
  reward::RewardVector reward;

  struct Flags {
    bool plan_parse_failed = false;
    bool program_parse_failed = false;
    bool backend_failed = false;
    bool oscillated = false;
  } flags;

  // Raw artifacts for audit/debugging.
  std::string plan_text;
  std::string program_text;
};

struct BenchmarkReport {
  uint32_t records = 0;
  double m1 = 0.0;  // golden pass rate
  double m2 = 0.0;  // golden pass AND target mutation failed
  std::map<std::string, uint32_t> count_by_type;
  std::map<std::string, double> m1_by_type;
  std::map<std::string, double> m2_by_type;
  // category -> (detected, total); detection counts only golden-pass records
  std::map<std::string, std::pair<uint32_t, uint32_t>> by_category;
  std::string config_fingerprint;
};

// Throws std::invalid_argument on an empty record set.
BenchmarkReport compute_metrics(const std::vector<EvalRecord>& records);

std::string report_table(const BenchmarkReport& r);

}  // namespace rtlmut::metrics
