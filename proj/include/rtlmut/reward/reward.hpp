#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rtlmut/sim/stimulus.hpp"

namespace rtlmut::reward {

// Composite reward on a 0-3 scale: total = r_o + w_m*r_m + r_j + r_c.
// w_m is 1 exactly when the golden run passed, so mutation-detection credit
// is granted only on top of basic correctness.
struct RewardVector {
  double r_o = 0.0;  // {0,1} golden pass
  double r_m = 0.0;  // [0,1] failed-mutation fraction
  double r_j = 0.0;  // {0,0.8} judge verdict
  double r_c = 0.0;  // {0,0.2} character-set check
  double w_m = 0.0;  // {0,1}, tied to r_o
  double total = 0.0;

  friend bool operator==(const RewardVector&, const RewardVector&) = default;
};

// Accepted characters for r_c: printable ASCII plus whitespace. Any byte
// outside this set (including all non-ASCII UTF-8) zeroes the term.
bool text_is_clean(const std::string& text);

RewardVector compute_reward(const sim::Verdict& golden_verdict,
                            const std::vector<sim::Verdict>& mutation_verdicts, bool judge_ok,
                            const std::string& plan_text);

// Group-relative advantage baselines. Bessel-corrected standard deviation
// throughout; see docs/hyperparameters.md for the numeric anchors.
enum class AdvantageMethod {
  WholeGroup,    // (r_i - mean) / max(std, eps_sigma)
  LeaveOneOut,   // (r_i - mean_{-i}) / std_{-i}, zero std falls back to 1
  SmuFixed,      // (r_i - mean_{-i}) / max(std_all, eps_sigma)
};

AdvantageMethod advantage_method_from(const std::string& name);  // whole|loo|smu
std::string advantage_method_name(AdvantageMethod m);

struct AdvantageGroup {
  std::vector<double> rewards;
  AdvantageMethod method = AdvantageMethod::WholeGroup;
  double epsilon_sigma = 1e-8;
};

// Throws std::invalid_argument when the group has fewer than 2 rewards.
std::vector<double> compute_advantages(const AdvantageGroup& g);

// One diversified-state sample: the same base design under a distinct
// mutation, with the reward its sampled action earned.
struct SmuSample {
  std::string base_state_id;
  std::string mutation_id;
  double reward = 0.0;
};

struct SmuGroup {
  std::string base_state_id;
  std::vector<SmuSample> members;
  bool below_min_size = false;  // fewer than 2 members
};

// Partitions samples by base state, keeping first-seen order. Duplicate
// (base_state_id, mutation_id) pairs are rejected: one sampled action per
// diversified state.
std::vector<SmuGroup> group_smu(const std::vector<SmuSample>& samples);

// PPO-style clipped surrogate term.
double clipped_term(double ratio, double advantage, double epsilon);

enum class Aggregation { SequenceMean, TokenMean };

struct ObjectiveConfig {
  double epsilon = 0.2;  // clip radius
  double beta = 0.01;    // KL coefficient
  Aggregation aggregation = Aggregation::SequenceMean;
};

// One group member: per-token probability ratios and KL terms plus the
// sample's (shared) advantage.
struct ObjectiveSample {
  std::vector<double> token_ratios;
  std::vector<double> token_kl;
  double advantage = 0.0;
};

// Group objective: per-token term = clipped_term - beta*kl; SequenceMean
// averages within each sample before averaging samples, TokenMean pools all
// tokens of the group.
double smu_objective(const std::vector<ObjectiveSample>& group, const ObjectiveConfig& cfg);

}  // namespace rtlmut::reward
