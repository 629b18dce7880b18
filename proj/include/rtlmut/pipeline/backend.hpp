#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtlmut/pipeline/plan.hpp"

namespace rtlmut::pipeline {

class BackendError : public std::runtime_error {
public:
  explicit BackendError(const std::string& msg) : std::runtime_error(msg) {}
};

// Stage-1/stage-2 model roles. Implementations must be interchangeable; the
// evaluator only ever sees the returned text.
class PolicyBackend {
public:
  virtual ~PolicyBackend() = default;
  // Stage 1: prompt -> test-plan text.
  virtual std::string generate_plan(const std::string& prompt) = 0;
  // Stage 2: prompt (plan + testbench template) -> stimulus-program text.
  virtual std::string compile_plan(const std::string& prompt) = 0;
};

class JudgeBackend {
public:
  virtual ~JudgeBackend() = default;
  virtual bool judge(const TestPlan& plan) = 0;
};

// Scripted mock: rules are tried in order, first match wins. Keys match by
// prompt substring, by prompt fingerprint (hex of fnv1a64), or match-all.
// Fully deterministic, which makes whole-pipeline runs reproducible offline.
class ScriptedMockBackend : public PolicyBackend {
public:
  enum class Match { Substring, Fingerprint, Any };
  struct Rule {
    Match match = Match::Any;
    std::string key;
    std::optional<std::string> plan_response;
    std::optional<std::string> program_response;
  };

  ScriptedMockBackend() = default;
  explicit ScriptedMockBackend(std::vector<Rule> rules) : rules_(std::move(rules)) {}
  static ScriptedMockBackend from_json_file(const std::string& path);

  void add_rule(Rule r) { rules_.push_back(std::move(r)); }

  std::string generate_plan(const std::string& prompt) override;
  std::string compile_plan(const std::string& prompt) override;

  static std::string prompt_fingerprint(const std::string& prompt);

private:
  std::string respond(const std::string& prompt, bool stage2);
  std::vector<Rule> rules_;
};

// Deterministic default judge: accepts a plan when every section carries
// enough substance to plausibly guide stage 2.
class HeuristicJudge : public JudgeBackend {
public:
  explicit HeuristicJudge(size_t min_section_chars = 8) : min_chars_(min_section_chars) {}
  bool judge(const TestPlan& plan) override;

private:
  size_t min_chars_;
};

// Chat-completion-style HTTP backend. Credentials come from the named
// environment variable; transient transport failures are retried with
// exponential backoff before surfacing as BackendError.
struct HttpBackendConfig {
  std::string endpoint;  // e.g. "http://127.0.0.1:8080"
  std::string path = "/v1/chat/completions";
  std::string model = "default";
  std::string api_key_env = "RTLMUT_API_KEY";
  int retries = 2;
  int backoff_ms = 100;
  int timeout_s = 60;
};

class HttpBackend : public PolicyBackend {
public:
  explicit HttpBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {}
  std::string generate_plan(const std::string& prompt) override { return complete(prompt); }
  std::string compile_plan(const std::string& prompt) override { return complete(prompt); }

private:
  std::string complete(const std::string& prompt);
  HttpBackendConfig cfg_;
};

}  // namespace rtlmut::pipeline
