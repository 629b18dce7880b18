#include "rtlmut/reward/reward.hpp"

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace rtlmut::reward {

bool text_is_clean(const std::string& text) {
  for (unsigned char c : text) {
    if (c >= 0x20 && c <= 0x7e) continue;
    if (c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') continue;
    return false;
  }
  return true;
}

RewardVector compute_reward(const sim::Verdict& golden_verdict,
                            const std::vector<sim::Verdict>& mutation_verdicts, bool judge_ok,
                            const std::string& plan_text) {
  if (mutation_verdicts.empty())
    throw std::invalid_argument("compute_reward needs at least one mutation verdict");
  RewardVector r;
  r.r_o = golden_verdict.passed ? 1.0 : 0.0;
  uint32_t failed = 0;
  for (const auto& v : mutation_verdicts)
    if (!v.passed) ++failed;
  r.r_m = static_cast<double>(failed) / static_cast<double>(mutation_verdicts.size());
  r.r_j = judge_ok ? 0.8 : 0.0;
  r.r_c = text_is_clean(plan_text) ? 0.2 : 0.0;
  r.w_m = r.r_o;
  r.total = r.r_o + r.w_m * r.r_m + r.r_j + r.r_c;
  return r;
}

AdvantageMethod advantage_method_from(const std::string& name) {
  if (name == "whole" || name == "whole_group") return AdvantageMethod::WholeGroup;
  if (name == "loo" || name == "leave_one_out") return AdvantageMethod::LeaveOneOut;
  if (name == "smu" || name == "smu_fixed") return AdvantageMethod::SmuFixed;
  throw std::invalid_argument("unknown advantage method '" + name + "' (whole|loo|smu)");
}

std::string advantage_method_name(AdvantageMethod m) {
  switch (m) {
    case AdvantageMethod::WholeGroup: return "whole_group";
    case AdvantageMethod::LeaveOneOut: return "leave_one_out";
    case AdvantageMethod::SmuFixed: return "smu_fixed";
  }
  return "?";
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Bessel-corrected sample standard deviation.
double stddev_of(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double s = 0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<double> compute_advantages(const AdvantageGroup& g) {
  const auto& r = g.rewards;
  size_t n = r.size();
  if (n < 2) throw std::invalid_argument("advantage group needs at least 2 rewards");
  std::vector<double> out(n);
  double mean_all = mean_of(r);
  double std_all = stddev_of(r, mean_all);

  switch (g.method) {
    case AdvantageMethod::WholeGroup: {
      double denom = std::max(std_all, g.epsilon_sigma);
      for (size_t i = 0; i < n; ++i) out[i] = (r[i] - mean_all) / denom;
      break;
    }
    case AdvantageMethod::LeaveOneOut:
    case AdvantageMethod::SmuFixed: {
      for (size_t i = 0; i < n; ++i) {
        std::vector<double> rest;
        rest.reserve(n - 1);
        for (size_t j = 0; j < n; ++j)
          if (j != i) rest.push_back(r[j]);
        double mean_rest = mean_of(rest);
        double denom;
        if (g.method == AdvantageMethod::LeaveOneOut) {
          double std_rest = stddev_of(rest, mean_rest);
          denom = std_rest == 0.0 ? 1.0 : std_rest;  // flat rest: unit divisor
        } else {
          denom = std::max(std_all, g.epsilon_sigma);
        }
        out[i] = (r[i] - mean_rest) / denom;
      }
      break;
    }
  }
  return out;
}

std::vector<SmuGroup> group_smu(const std::vector<SmuSample>& samples) {
  std::vector<SmuGroup> groups;
  std::map<std::string, size_t> index;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& s : samples) {
    if (!seen.emplace(s.base_state_id, s.mutation_id).second)
      throw std::invalid_argument("duplicate (base_state_id, mutation_id) pair: " +
                                  s.base_state_id + "/" + s.mutation_id);
    auto [it, fresh] = index.emplace(s.base_state_id, groups.size());
    if (fresh) {
      SmuGroup g;
      g.base_state_id = s.base_state_id;
      groups.push_back(std::move(g));
    }
    groups[it->second].members.push_back(s);
  }
  for (auto& g : groups) g.below_min_size = g.members.size() < 2;
  return groups;
}

double clipped_term(double ratio, double advantage, double epsilon) {
  if (advantage > 0) return std::min(ratio, 1.0 + epsilon) * advantage;
  return std::max(ratio, 1.0 - epsilon) * advantage;
}

double smu_objective(const std::vector<ObjectiveSample>& group, const ObjectiveConfig& cfg) {
  if (group.empty()) throw std::invalid_argument("objective group is empty");
  if (cfg.aggregation == Aggregation::SequenceMean) {
    double acc = 0;
    for (const auto& s : group) {
      if (s.token_ratios.empty())
        throw std::invalid_argument("objective sample has no tokens");
      double sample_acc = 0;
      for (size_t t = 0; t < s.token_ratios.size(); ++t) {
        double kl = t < s.token_kl.size() ? s.token_kl[t] : 0.0;
        sample_acc += clipped_term(s.token_ratios[t], s.advantage, cfg.epsilon) - cfg.beta * kl;
      }
      acc += sample_acc / static_cast<double>(s.token_ratios.size());
    }
    return acc / static_cast<double>(group.size());
  }
  // TokenMean pools every token in the group (the mode the training setup
  // disables; kept for comparison).
  double acc = 0;
  size_t tokens = 0;
  for (const auto& s : group) {
    if (s.token_ratios.empty()) throw std::invalid_argument("objective sample has no tokens");
    for (size_t t = 0; t < s.token_ratios.size(); ++t) {
      double kl = t < s.token_kl.size() ? s.token_kl[t] : 0.0;
      acc += clipped_term(s.token_ratios[t], s.advantage, cfg.epsilon) - cfg.beta * kl;
      ++tokens;
    }
  }
  return acc / static_cast<double>(tokens);
}

}  // namespace rtlmut::reward
