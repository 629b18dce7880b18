#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtlmut/hdl/ast.hpp"

namespace rtlmut::sim {

// One step of a stimulus program: drive inputs, advance, optionally check
// outputs after the final settle of the step.
struct Step {
  std::map<std::string, hdl::BitVec> drives;
  std::map<std::string, hdl::BitVec> expect;
  uint32_t ticks = 1;

  friend bool operator==(const Step&, const Step&) = default;
};

struct ResetSpec {
  std::string signal;
  bool active_low = false;
  friend bool operator==(const ResetSpec&, const ResetSpec&) = default;
};

// Executable form of a test plan. The clock, when present, is owned by the
// program: the simulator never free-runs it.
struct StimulusProgram {
  std::optional<std::string> clock;
  std::optional<ResetSpec> reset;
  std::vector<Step> steps;

  friend bool operator==(const StimulusProgram&, const StimulusProgram&) = default;
};

struct Verdict {
  bool passed = false;
  std::optional<uint32_t> failing_step;
  std::string failing_output;              // set when failing_step is
  std::optional<hdl::BitVec> observed;
  std::optional<hdl::BitVec> expected;
  uint64_t cycles_run = 0;
};

// JSON wire format, schema "rtlmut.stimulus.v1" (documented in
// docs/stimulus_schema.md). parse accepts integers, "0x.." / decimal strings
// and Verilog-style sized literals as values; emit writes plain integers.
std::string to_json(const StimulusProgram& p);
StimulusProgram program_from_json(const std::string& json_text);

}  // namespace rtlmut::sim
