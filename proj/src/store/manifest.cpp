#include "rtlmut/store/manifest.hpp"

#include <fstream>
#include <sstream>

#include "rtlmut/store/records.hpp"
#include "rtlmut/util/rng.hpp"

namespace rtlmut::store {

using nlohmann::json;

std::string manifest_to_string(const Manifest& m) {
  json header = m.header_extra.is_object() ? m.header_extra : json::object();
  header["schema_version"] = m.schema_version;
  header["type"] = m.record_type;
  std::string out = header.dump() + "\n";
  for (const auto& r : m.records) out += r.dump() + "\n";
  return out;
}

Manifest manifest_from_string(const std::string& text, const std::string& origin) {
  Manifest m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ManifestError(origin + ":" + std::to_string(lineno) +
                          ": malformed record: " + e.what());
    }
    if (!have_header) {
      if (!j.is_object() || !j.contains("schema_version") || !j.contains("type"))
        throw ManifestError(origin + ":" + std::to_string(lineno) +
                            ": first line must be a {schema_version, type} header");
      m.schema_version = j["schema_version"].get<uint32_t>();
      if (m.schema_version != 1)
        throw ManifestError(origin + ": unsupported schema_version " +
                            std::to_string(m.schema_version));
      m.record_type = j["type"].get<std::string>();
      j.erase("schema_version");
      j.erase("type");
      m.header_extra = std::move(j);
      have_header = true;
      continue;
    }
    m.records.push_back(std::move(j));
  }
  if (!have_header) throw ManifestError(origin + ": empty manifest (missing header line)");
  return m;
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return manifest_from_string(ss.str(), path);
}

void write_manifest(const std::string& path, const Manifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ManifestError("cannot write manifest '" + path + "'");
  out << manifest_to_string(m);
  if (!out) throw ManifestError("short write to manifest '" + path + "'");
}

std::string config_fingerprint(const json& j) {
  std::string s = j.dump();
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(s.data(), s.size())));
  return std::string(buf);
}

}  // namespace rtlmut::store

// ---------------------------------------------------------------------------
// ADL conversions
// ---------------------------------------------------------------------------

namespace rtlmut::sim {

using nlohmann::json;

void to_json(json& j, const Verdict& v) {
  j = json{{"passed", v.passed}, {"cycles_run", v.cycles_run}};
  if (v.failing_step) {
    j["failing_step"] = *v.failing_step;
    j["failing_output"] = v.failing_output;
    if (v.observed) j["observed"] = json{{"width", v.observed->width}, {"bits", v.observed->bits}};
    if (v.expected) j["expected"] = json{{"width", v.expected->width}, {"bits", v.expected->bits}};
  }
}

void from_json(const json& j, Verdict& v) {
  v = Verdict{};
  v.passed = j.at("passed").get<bool>();
  v.cycles_run = j.value("cycles_run", 0ull);
  if (j.contains("failing_step")) {
    v.failing_step = j["failing_step"].get<uint32_t>();
    v.failing_output = j.value("failing_output", "");
    if (j.contains("observed"))
      v.observed = hdl::BitVec(j["observed"]["width"].get<uint32_t>(),
                               j["observed"]["bits"].get<uint64_t>());
    if (j.contains("expected"))
      v.expected = hdl::BitVec(j["expected"]["width"].get<uint32_t>(),
                               j["expected"]["bits"].get<uint64_t>());
  }
}

}  // namespace rtlmut::sim

namespace rtlmut::validate {

using nlohmann::json;

void to_json(json& j, const ValidationReport& r) {
  j = json{{"vectors_run", r.vectors_run},
           {"mismatches", r.mismatches},
           {"classification", r.classification == Classification::Clean ? "clean" : "mutated"},
           {"capped", r.capped},
           {"oscillation", r.oscillation}};
  if (r.first_mismatch) {
    const auto& f = *r.first_mismatch;
    j["first_mismatch"] = json{{"vector", f.vector},
                               {"cycle", f.cycle},
                               {"output", f.output},
                               {"golden", json{{"width", f.golden.width}, {"bits", f.golden.bits}}},
                               {"candidate",
                                json{{"width", f.candidate.width}, {"bits", f.candidate.bits}}}};
  }
}

void from_json(const json& j, ValidationReport& r) {
  r = ValidationReport{};
  r.vectors_run = j.at("vectors_run").get<uint32_t>();
  r.mismatches = j.at("mismatches").get<uint64_t>();
  r.classification =
      j.at("classification").get<std::string>() == "clean" ? Classification::Clean
                                                           : Classification::Mutated;
  r.capped = j.value("capped", false);
  r.oscillation = j.value("oscillation", false);
  if (j.contains("first_mismatch")) {
    const auto& jf = j["first_mismatch"];
    FirstMismatch f;
    f.vector = jf.at("vector").get<uint32_t>();
    f.cycle = jf.at("cycle").get<uint32_t>();
    f.output = jf.at("output").get<std::string>();
    f.golden = hdl::BitVec(jf["golden"]["width"].get<uint32_t>(), jf["golden"]["bits"].get<uint64_t>());
    f.candidate = hdl::BitVec(jf["candidate"]["width"].get<uint32_t>(),
                              jf["candidate"]["bits"].get<uint64_t>());
    r.first_mismatch = f;
  }
}

}  // namespace rtlmut::validate

namespace rtlmut::reward {

using nlohmann::json;

void to_json(json& j, const RewardVector& r) {
  j = json{{"r_o", r.r_o}, {"r_m", r.r_m},   {"r_j", r.r_j},
           {"r_c", r.r_c}, {"w_m", r.w_m},   {"total", r.total}};
}

void from_json(const json& j, RewardVector& r) {
  r.r_o = j.at("r_o").get<double>();
  r.r_m = j.at("r_m").get<double>();
  r.r_j = j.at("r_j").get<double>();
  r.r_c = j.at("r_c").get<double>();
  r.w_m = j.at("w_m").get<double>();
  r.total = j.at("total").get<double>();
}

}  // namespace rtlmut::reward

namespace rtlmut::mutate {

using nlohmann::json;

void to_json(json& j, const MutationRecord& r) {
  j = json{{"is_equivalence", r.is_equivalence},
           {"category", r.category},
           {"variant", r.variant},
           {"site", json{{"ordinal", r.site.ordinal}, {"path", r.site.path}}},
           {"before", r.before},
           {"after", r.after},
           {"seed", r.seed}};
}

void from_json(const json& j, MutationRecord& r) {
  r.is_equivalence = j.at("is_equivalence").get<bool>();
  r.category = j.at("category").get<std::string>();
  r.variant = j.at("variant").get<std::string>();
  r.site.ordinal = j.at("site").at("ordinal").get<uint32_t>();
  r.site.path = j.at("site").at("path").get<std::string>();
  r.before = j.value("before", "");
  r.after = j.value("after", "");
  r.seed = j.at("seed").get<uint64_t>();
}

void to_json(json& j, const TreeNode& n) {
  j = json{{"id", n.id},
           {"kind", node_kind_name(n.kind)},
           {"level", n.level},
           {"code", n.code.text},
           {"origin", n.code.origin},
           {"fingerprint", n.fingerprint}};
  if (n.parent_id) j["parent_id"] = *n.parent_id;
  if (n.record) j["record"] = *n.record;
  if (n.validation) j["validation"] = *n.validation;
}

void from_json(const json& j, TreeNode& n) {
  n = TreeNode{};
  n.id = j.at("id").get<std::string>();
  n.kind = node_kind_from(j.at("kind").get<std::string>());
  n.level = j.at("level").get<uint32_t>();
  n.code.text = j.at("code").get<std::string>();
  n.code.origin = j.value("origin", n.id);
  n.fingerprint = j.value("fingerprint", "");
  if (j.contains("parent_id")) n.parent_id = j["parent_id"].get<std::string>();
  if (j.contains("record")) n.record = j["record"].get<MutationRecord>();
  if (j.contains("validation")) n.validation = j["validation"].get<validate::ValidationReport>();
}

void to_json(json& j, const TreeConfig& c) {
  j = json{{"n_equivalents", c.n_equivalents},
           {"n_level1", c.n_level1},
           {"max_depth", c.max_depth},
           {"level2_per_parent", c.level2_per_parent},
           {"level2_operator_pool", c.level2_operator_pool},
           {"vectors_per_validation", c.vectors_per_validation},
           {"seed", c.seed},
           {"retry_budget", c.retry_budget}};
}

void from_json(const json& j, TreeConfig& c) {
  c = TreeConfig{};
  c.n_equivalents = j.value("n_equivalents", c.n_equivalents);
  c.n_level1 = j.value("n_level1", c.n_level1);
  c.max_depth = j.value("max_depth", c.max_depth);
  c.level2_per_parent = j.value("level2_per_parent", c.level2_per_parent);
  c.level2_operator_pool =
      j.value("level2_operator_pool", std::vector<std::string>{});
  c.vectors_per_validation = j.value("vectors_per_validation", c.vectors_per_validation);
  c.seed = j.value("seed", c.seed);
  c.retry_budget = j.value("retry_budget", c.retry_budget);
}

}  // namespace rtlmut::mutate

namespace rtlmut::metrics {

using nlohmann::json;

void to_json(json& j, const EvalRecord& r) {
  j = json{{"spec_id", r.spec_id},
           {"mutation_id", r.mutation_id},
           {"category", r.category},
           {"circuit_type", circuit_type_name(r.circuit_type)},
           {"golden_verdict", r.golden_verdict},
           {"mutation_verdict", r.mutation_verdict},
           {"reward", r.reward},
           {"flags", json{{"plan_parse_failed", r.flags.plan_parse_failed},
                          {"program_parse_failed", r.flags.program_parse_failed},
                          {"backend_failed", r.flags.backend_failed},
                          {"oscillated", r.flags.oscillated}}},
           {"plan_text", r.plan_text},
           {"program_text", r.program_text}};
}

void from_json(const json& j, EvalRecord& r) {
  r = EvalRecord{};
  r.spec_id = j.at("spec_id").get<std::string>();
  r.mutation_id = j.at("mutation_id").get<std::string>();
  r.category = j.value("category", "");
  r.circuit_type = j.at("circuit_type").get<std::string>() == "sequential"
                       ? CircuitType::Sequential
                       : CircuitType::Combinational;
  r.golden_verdict = j.at("golden_verdict").get<sim::Verdict>();
  r.mutation_verdict = j.at("mutation_verdict").get<sim::Verdict>();
  r.reward = j.at("reward").get<reward::RewardVector>();
  if (j.contains("flags")) {
    const auto& jf = j["flags"];
    r.flags.plan_parse_failed = jf.value("plan_parse_failed", false);
    r.flags.program_parse_failed = jf.value("program_parse_failed", false);
    r.flags.backend_failed = jf.value("backend_failed", false);
    r.flags.oscillated = jf.value("oscillated", false);
  }
  r.plan_text = j.value("plan_text", "");
  r.program_text = j.value("program_text", "");
}

}  // namespace rtlmut::metrics

namespace rtlmut::pipeline {

using nlohmann::json;

void to_json(json& j, const SftPair& p) {
  j = json{{"spec_id", p.spec_id},
           {"mutation_id", p.mutation_id},
           {"prompt", p.prompt},
           {"plan_text", p.plan_text}};
}

void from_json(const json& j, SftPair& p) {
  p.spec_id = j.at("spec_id").get<std::string>();
  p.mutation_id = j.at("mutation_id").get<std::string>();
  p.prompt = j.at("prompt").get<std::string>();
  p.plan_text = j.at("plan_text").get<std::string>();
}

void to_json(json& j, const SpecRecord& s) {
  j = json{{"id", s.id},
           {"description", s.description},
           {"golden", s.golden.text},
           {"golden_origin", s.golden.origin},
           {"mutations", s.mutations}};
}

void from_json(const json& j, SpecRecord& s) {
  s = SpecRecord{};
  s.id = j.at("id").get<std::string>();
  s.description = j.at("description").get<std::string>();
  s.golden.text = j.at("golden").get<std::string>();
  s.golden.origin = j.value("golden_origin", s.id);
  if (j.contains("mutations"))
    s.mutations = j["mutations"].get<std::vector<mutate::TreeNode>>();
}

}  // namespace rtlmut::pipeline
