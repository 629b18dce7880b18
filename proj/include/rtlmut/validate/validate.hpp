#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtlmut/hdl/ast.hpp"
#include "rtlmut/sim/sim.hpp"

namespace rtlmut::validate {

enum class InputDistribution { Uniform, BiasedCorner };

struct RandomStimulusConfig {
  uint32_t vectors = 10000;
  uint32_t cycles_per_vector = 16;
  double reset_toggle_probability = 0.1;
  InputDistribution input_distribution = InputDistribution::Uniform;
  uint64_t seed = 0;
  // Early exit once this many mismatching cycles have been counted; 0 counts
  // everything. The report records whether the cap fired.
  uint32_t mismatch_cap = 8;
  uint32_t delta_limit = 1000;
};

enum class Classification { Clean, Mutated };

struct FirstMismatch {
  uint32_t vector = 0;
  uint32_t cycle = 0;
  std::string output;
  hdl::BitVec golden;
  hdl::BitVec candidate;
  friend bool operator==(const FirstMismatch&, const FirstMismatch&) = default;
};

struct ValidationReport {
  uint32_t vectors_run = 0;
  uint64_t mismatches = 0;  // cycles on which at least one output differed
  std::optional<FirstMismatch> first_mismatch;
  Classification classification = Classification::Clean;
  bool capped = false;
  bool oscillation = false;
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

// Clock/reset detection by naming convention: clk/clock for clocks,
// rst*/reset* for resets with polarity from a _n/_b suffix. Shared by the
// random generator and the testbench template builder.
std::optional<std::string> find_clock(const std::vector<hdl::PortDecl>& ports);
std::optional<sim::ResetSpec> find_reset(const std::vector<hdl::PortDecl>& ports);

// Deterministic function of (cfg.seed, index): drives every non-clock input
// each cycle, asserts reset on cycle 0 and re-asserts it with the configured
// probability afterwards. Carries no expectations; comparison is always
// golden-versus-candidate.
sim::StimulusProgram gen_random_program(const std::vector<hdl::PortDecl>& iface,
                                        const RandomStimulusConfig& cfg, uint64_t index);

// Random-stimulus functional comparison. Both designs run the same programs;
// a mismatch is a cycle where any output differs. Reports are bit-identical
// across runs and thread counts for a fixed config.
ValidationReport compare(const sim::SimModel& golden, const sim::SimModel& candidate,
                         const RandomStimulusConfig& cfg, int threads = 0);
ValidationReport compare(const hdl::ModuleDecl& golden, const hdl::ModuleDecl& candidate,
                         const RandomStimulusConfig& cfg, int threads = 0);

// Straight-line single-threaded reference; kept as the oracle the parallel
// kernel is tested against.
ValidationReport compare_serial(const sim::SimModel& golden, const sim::SimModel& candidate,
                                const RandomStimulusConfig& cfg);

// Throws sim::InterfaceError unless both designs expose the same ports.
void check_same_interface(const hdl::ModuleDecl& golden, const hdl::ModuleDecl& candidate);

}  // namespace rtlmut::validate
