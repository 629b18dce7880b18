#include <omp.h>

#include <chrono>
#include <thread>

#include "rtlmut/hdl/parser.hpp"
#include "rtlmut/pipeline/pipeline.hpp"

namespace rtlmut::pipeline {

namespace {

// Retries transient backend failures, then lets the error surface to the
// caller's failure handling.
std::string with_retries(const std::function<std::string()>& fn, const PipelineConfig& cfg) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const BackendError&) {
      if (attempt >= cfg.backend_retries) throw;
      std::this_thread::sleep_for(std::chrono::milliseconds(cfg.backoff_ms << attempt));
    }
  }
}

}  // namespace

metrics::EvalRecord evaluate_sample(const SpecRecord& spec, const mutate::TreeNode& mutation,
                                    PolicyBackend& policy, JudgeBackend& judge,
                                    const PipelineConfig& cfg) {
  metrics::EvalRecord rec;
  rec.spec_id = spec.id;
  rec.mutation_id = mutation.id;
  if (mutation.record) rec.category = mutation.record->category;

  hdl::ModuleDecl golden = hdl::parse(spec.golden);
  rec.circuit_type = metrics::classify_circuit(golden);

  // Stage 1: plan generation.
  std::string prompt1 = render_stage1_prompt(spec, mutation);
  TestPlan plan;
  bool have_plan = false;
  try {
    rec.plan_text = with_retries([&] { return policy.generate_plan(prompt1); }, cfg);
    plan = parse_test_plan(rec.plan_text);
    have_plan = true;
  } catch (const BackendError&) {
    rec.flags.backend_failed = true;
  } catch (const MissingSectionError&) {
    rec.flags.plan_parse_failed = true;
  }

  // Stage 2: compile the plan to a stimulus program.
  sim::StimulusProgram program;
  bool have_program = false;
  if (have_plan) {
    try {
      auto tb = make_template(golden.ports);
      std::string prompt2 = render_stage2_prompt(plan, tb);
      rec.program_text = with_retries([&] { return policy.compile_plan(prompt2); }, cfg);
      program = sim::program_from_json(rec.program_text);
      have_program = true;
    } catch (const BackendError&) {
      rec.flags.backend_failed = true;
    } catch (const std::exception&) {
      rec.flags.program_parse_failed = true;
    }
  }

  // Execute on the golden and on every mutation of the spec. Failures at any
  // earlier stage leave failed verdicts in place (r_o = 0 path).
  sim::SimOptions opts{cfg.delta_limit};
  std::vector<sim::Verdict> mutation_verdicts(spec.mutations.size());
  if (have_program) {
    try {
      sim::SimModel golden_model(golden);
      rec.golden_verdict = sim::run_stimulus(golden_model, program, opts);
    } catch (const sim::OscillationError&) {
      rec.flags.oscillated = true;
    } catch (const sim::InterfaceError&) {
      rec.flags.program_parse_failed = true;  // program does not fit the interface
    }
    for (size_t i = 0; i < spec.mutations.size(); ++i) {
      try {
        hdl::ModuleDecl mut = hdl::parse(spec.mutations[i].code);
        mutation_verdicts[i] = sim::run_stimulus(mut, program, opts);
      } catch (const sim::OscillationError&) {
        rec.flags.oscillated = true;  // oscillating mutant counts as failed
      } catch (const std::exception&) {
        // Unparseable or interface-broken mutant: keep the failed verdict.
      }
    }
  }

  for (size_t i = 0; i < spec.mutations.size(); ++i)
    if (spec.mutations[i].id == mutation.id) rec.mutation_verdict = mutation_verdicts[i];

  bool judge_ok = have_plan && judge.judge(plan);
  // mutation_verdicts is never empty: render_stage1_prompt checked membership.
  rec.reward = reward::compute_reward(rec.golden_verdict, mutation_verdicts, judge_ok,
                                      rec.plan_text);
  return rec;
}

std::vector<metrics::EvalRecord> evaluate_all(const std::vector<SpecRecord>& specs,
                                              PolicyBackend& policy, JudgeBackend& judge,
                                              const PipelineConfig& cfg) {
  struct Item {
    const SpecRecord* spec;
    const mutate::TreeNode* mutation;
  };
  std::vector<Item> items;
  for (const auto& s : specs)
    for (const auto& m : s.mutations) items.push_back({&s, &m});

  int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
  std::vector<metrics::EvalRecord> records(items.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < static_cast<int>(items.size()); ++i) {
    auto iu = static_cast<size_t>(i);
    records[iu] = evaluate_sample(*items[iu].spec, *items[iu].mutation, policy, judge, cfg);
  }
  return records;
}

std::vector<SftPair> curate_sft(const std::vector<SpecRecord>& specs, PolicyBackend& policy,
                                JudgeBackend& judge, const PipelineConfig& cfg) {
  auto records = evaluate_all(specs, policy, judge, cfg);
  std::vector<SftPair> pairs;
  size_t r = 0;
  for (const auto& s : specs) {
    for (const auto& m : s.mutations) {
      const auto& rec = records[r++];
      bool m2 = rec.golden_verdict.passed && !rec.mutation_verdict.passed;
      if (m2) pairs.push_back({s.id, m.id, render_stage1_prompt(s, m), rec.plan_text});
    }
  }
  return pairs;
}

}  // namespace rtlmut::pipeline
