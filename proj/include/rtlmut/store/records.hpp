#pragma once

#include <json.hpp>

#include "rtlmut/metrics/metrics.hpp"
#include "rtlmut/mutate/tree.hpp"
#include "rtlmut/pipeline/pipeline.hpp"
#include "rtlmut/reward/reward.hpp"
#include "rtlmut/sim/stimulus.hpp"
#include "rtlmut/validate/validate.hpp"

// nlohmann ADL hooks for the records that cross the manifest boundary.
// Round-trip identity for every field; readers reject structurally bad input
// with nlohmann's own errors.

namespace rtlmut::sim {
void to_json(nlohmann::json& j, const Verdict& v);
void from_json(const nlohmann::json& j, Verdict& v);
}  // namespace rtlmut::sim

namespace rtlmut::validate {
void to_json(nlohmann::json& j, const ValidationReport& r);
void from_json(const nlohmann::json& j, ValidationReport& r);
}  // namespace rtlmut::validate

namespace rtlmut::reward {
void to_json(nlohmann::json& j, const RewardVector& r);
void from_json(const nlohmann::json& j, RewardVector& r);
}  // namespace rtlmut::reward

namespace rtlmut::mutate {
void to_json(nlohmann::json& j, const MutationRecord& r);
void from_json(const nlohmann::json& j, MutationRecord& r);
void to_json(nlohmann::json& j, const TreeNode& n);
void from_json(const nlohmann::json& j, TreeNode& n);
void to_json(nlohmann::json& j, const TreeConfig& c);
void from_json(const nlohmann::json& j, TreeConfig& c);
}  // namespace rtlmut::mutate

namespace rtlmut::metrics {
void to_json(nlohmann::json& j, const EvalRecord& r);
void from_json(const nlohmann::json& j, EvalRecord& r);
}  // namespace rtlmut::metrics

namespace rtlmut::pipeline {
void to_json(nlohmann::json& j, const SftPair& p);
void from_json(const nlohmann::json& j, SftPair& p);
void to_json(nlohmann::json& j, const SpecRecord& s);
void from_json(const nlohmann::json& j, SpecRecord& s);
}  // namespace rtlmut::pipeline

namespace rtlmut::store {

// Stable hex digest of a config-ish JSON value; embedded in file-backed run
// outputs so results are traceable to their configuration.
std::string config_fingerprint(const nlohmann::json& j);

}  // namespace rtlmut::store
