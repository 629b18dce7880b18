#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtlmut/hdl/ast.hpp"
#include "rtlmut/metrics/metrics.hpp"
#include "rtlmut/mutate/tree.hpp"
#include "rtlmut/pipeline/backend.hpp"
#include "rtlmut/pipeline/plan.hpp"
#include "rtlmut/sim/stimulus.hpp"

namespace rtlmut::pipeline {

// One evaluation unit: a described design, its golden source, and the
// mutation variants evaluation runs against.
struct SpecRecord {
  std::string id;
  std::string description;
  hdl::SourceUnit golden;
  std::vector<mutate::TreeNode> mutations;
};

// Interface mirror plus a stimulus-program skeleton with fill-in markers.
// Derivable from the port list alone; deterministic per interface.
struct TestbenchTemplate {
  std::vector<hdl::PortDecl> ports;
  std::optional<std::string> clock;
  std::optional<sim::ResetSpec> reset;
  std::string skeleton;
};

TestbenchTemplate make_template(const std::vector<hdl::PortDecl>& ports);

// Prompt rendering. Built-in templates can be overridden by files with the
// same placeholders (see templates/ in the repo).
std::string render_stage1_prompt(const SpecRecord& spec, const mutate::TreeNode& mutation);
std::string render_stage2_prompt(const TestPlan& plan, const TestbenchTemplate& tb);
void set_stage1_template(std::string text);  // empty resets to built-in
void set_stage2_template(std::string text);

struct PipelineConfig {
  int backend_retries = 2;
  int backoff_ms = 100;
  uint32_t delta_limit = 1000;
  int threads = 0;  // 0: library default
};

// Runs the two-stage flow for one (spec, target mutation): render, generate,
// parse, compile, execute on golden and on every mutation of the spec.
// Backend and parse failures come back as failed verdicts in the record;
// this function does not throw for them.
metrics::EvalRecord evaluate_sample(const SpecRecord& spec, const mutate::TreeNode& mutation,
                                    PolicyBackend& policy, JudgeBackend& judge,
                                    const PipelineConfig& cfg);

// Every (spec, mutation) pair, in input order; pairs evaluate in parallel.
std::vector<metrics::EvalRecord> evaluate_all(const std::vector<SpecRecord>& specs,
                                              PolicyBackend& policy, JudgeBackend& judge,
                                              const PipelineConfig& cfg);

struct SftPair {
  std::string spec_id;
  std::string mutation_id;
  std::string prompt;
  std::string plan_text;
};

// Keeps a (prompt, plan) pair exactly when the golden passed and the target
// mutation failed the same stimulus.
std::vector<SftPair> curate_sft(const std::vector<SpecRecord>& specs, PolicyBackend& policy,
                                JudgeBackend& judge, const PipelineConfig& cfg);

}  // namespace rtlmut::pipeline
