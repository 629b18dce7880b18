#include <stdexcept>

#include "rtlmut/pipeline/pipeline.hpp"

namespace rtlmut::pipeline {

namespace {

const char* kStage1Builtin = R"(You are a hardware verification engineer.

A module was implemented from the description below. The implementation may
contain a bug.

[DESCRIPTION]
{{description}}

[RTL CODE]
{{code}}

Write a unit test plan that distinguishes a correct implementation of the
description from this code if it is buggy. Respond with exactly these four
sections:

Difference: <what the described design should do that this code might not>
Stimuli: <the input sequence, cycle by cycle, that elicits the difference>
Expected Outputs: <the outputs a correct design produces for those stimuli>
Reasoning: <why these stimuli expose the difference>
)";

const char* kStage2Builtin = R"(You are a testbench compiler. Turn the test plan below into a stimulus
program using the JSON schema shown by the skeleton. Replace every <FILL>
marker, add as many steps as the plan needs, and respond with JSON only.

[TEST PLAN]
Difference: {{difference}}
Stimuli: {{stimuli}}
Expected Outputs: {{expected_outputs}}
Reasoning: {{reasoning}}

[TESTBENCH SKELETON]
{{skeleton}}
)";

std::string g_stage1_override;
std::string g_stage2_override;

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
  size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
  return text;
}

}  // namespace

void set_stage1_template(std::string text) { g_stage1_override = std::move(text); }
void set_stage2_template(std::string text) { g_stage2_override = std::move(text); }

std::string render_stage1_prompt(const SpecRecord& spec, const mutate::TreeNode& mutation) {
  if (spec.description.empty())
    throw std::invalid_argument("spec '" + spec.id + "' has an empty description");
  bool belongs = false;
  for (const auto& m : spec.mutations)
    if (m.id == mutation.id) belongs = true;
  if (!belongs)
    throw std::invalid_argument("mutation '" + mutation.id + "' does not belong to spec '" +
                                spec.id + "'");
  std::string t = g_stage1_override.empty() ? kStage1Builtin : g_stage1_override;
  t = replace_all(std::move(t), "{{description}}", spec.description);
  t = replace_all(std::move(t), "{{code}}", mutation.code.text);
  t = replace_all(std::move(t), "{{spec_id}}", spec.id);
  t = replace_all(std::move(t), "{{mutation_id}}", mutation.id);
  return t;
}

std::string render_stage2_prompt(const TestPlan& plan, const TestbenchTemplate& tb) {
  std::string t = g_stage2_override.empty() ? kStage2Builtin : g_stage2_override;
  t = replace_all(std::move(t), "{{difference}}", plan.difference);
  t = replace_all(std::move(t), "{{stimuli}}", plan.stimuli);
  t = replace_all(std::move(t), "{{expected_outputs}}", plan.expected_outputs);
  t = replace_all(std::move(t), "{{reasoning}}", plan.reasoning);
  t = replace_all(std::move(t), "{{skeleton}}", tb.skeleton);
  return t;
}

}  // namespace rtlmut::pipeline
