#include "rtlmut/pipeline/backend.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "rtlmut/util/rng.hpp"

namespace rtlmut::pipeline {

using nlohmann::json;

std::string ScriptedMockBackend::prompt_fingerprint(const std::string& prompt) {
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx",
           static_cast<unsigned long long>(fnv1a64(prompt.data(), prompt.size())));
  return std::string(buf);
}

ScriptedMockBackend ScriptedMockBackend::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BackendError("cannot open mock script '" + path + "'");
  json j = json::parse(in);
  if (!j.is_array()) throw BackendError("mock script must be a JSON array of rules");
  std::vector<Rule> rules;
  for (const auto& jr : j) {
    Rule r;
    std::string match = jr.value("match", "any");
    if (match == "substring") r.match = Match::Substring;
    else if (match == "fingerprint") r.match = Match::Fingerprint;
    else if (match == "any") r.match = Match::Any;
    else throw BackendError("mock rule match must be substring|fingerprint|any");
    r.key = jr.value("key", "");
    if (jr.contains("plan")) r.plan_response = jr["plan"].get<std::string>();
    if (jr.contains("program")) r.program_response = jr["program"].get<std::string>();
    rules.push_back(std::move(r));
  }
  return ScriptedMockBackend(std::move(rules));
}

std::string ScriptedMockBackend::respond(const std::string& prompt, bool stage2) {
  for (const auto& r : rules_) {
    const auto& response = stage2 ? r.program_response : r.plan_response;
    if (!response) continue;
    bool hit = false;
    switch (r.match) {
      case Match::Substring: hit = prompt.find(r.key) != std::string::npos; break;
      case Match::Fingerprint: hit = prompt_fingerprint(prompt) == r.key; break;
      case Match::Any: hit = true; break;
    }
    if (hit) return *response;
  }
  throw BackendError(std::string("mock backend has no ") + (stage2 ? "program" : "plan") +
                     " rule matching this prompt");
}

std::string ScriptedMockBackend::generate_plan(const std::string& prompt) {
  return respond(prompt, false);
}

std::string ScriptedMockBackend::compile_plan(const std::string& prompt) {
  return respond(prompt, true);
}

bool HeuristicJudge::judge(const TestPlan& plan) {
  for (const std::string* s :
       {&plan.difference, &plan.stimuli, &plan.expected_outputs, &plan.reasoning})
    if (s->size() < min_chars_) return false;
  return true;
}

std::string HttpBackend::complete(const std::string& prompt) {
  json body = {
      {"model", cfg_.model},
      {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
  };
  httplib::Headers headers;
  if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);

  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(cfg_.backoff_ms << (attempt - 1)));
    httplib::Client client(cfg_.endpoint);
    client.set_read_timeout(cfg_.timeout_s, 0);
    client.set_connection_timeout(cfg_.timeout_s, 0);
    auto res = client.Post(cfg_.path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = "transport failure (" + httplib::to_string(res.error()) + ")";
      continue;
    }
    if (res->status >= 500) {
      last_error = "server returned " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw BackendError("backend rejected request with status " + std::to_string(res->status));
    try {
      json j = json::parse(res->body);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception& e) {
      throw BackendError(std::string("malformed backend response: ") + e.what());
    }
  }
  throw BackendError("backend unreachable after " + std::to_string(cfg_.retries + 1) +
                     " attempts: " + last_error);
}

}  // namespace rtlmut::pipeline
