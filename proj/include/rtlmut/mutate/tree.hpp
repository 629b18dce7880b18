#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtlmut/hdl/ast.hpp"
#include "rtlmut/mutate/mutate.hpp"
#include "rtlmut/validate/validate.hpp"

namespace rtlmut::mutate {

enum class NodeKind { Golden, Equivalent, Mutation };

std::string node_kind_name(NodeKind k);
NodeKind node_kind_from(const std::string& name);

struct TreeNode {
  std::string id;
  std::optional<std::string> parent_id;
  NodeKind kind = NodeKind::Golden;
  uint32_t level = 0;
  hdl::SourceUnit code;
  std::string fingerprint;
  std::optional<MutationRecord> record;                 // absent on golden
  std::optional<validate::ValidationReport> validation; // absent on golden
};

struct TreeConfig {
  uint32_t n_equivalents = 5;
  uint32_t n_level1 = 3;
  uint32_t max_depth = 1;       // 1: first-level bugs only, 2: add a deeper wave
  uint32_t level2_per_parent = 1;
  // Operator pool for levels >= 2, as "category:variant" pairs; empty means
  // every documented rewrite variant.
  std::vector<std::string> level2_operator_pool;
  uint32_t vectors_per_validation = 256;
  uint64_t seed = 0;
  uint32_t retry_budget = 8;    // resample attempts per requested child
  friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

struct Shortfall {
  std::string parent_id;
  std::string kind;  // "equivalent" or "mutation"
  uint32_t level = 0;
  uint32_t slot = 0;
  uint32_t attempts = 0;
};

struct MutationTree {
  std::string spec_id;
  TreeConfig config;
  std::vector<TreeNode> nodes;  // golden first, then acceptance order
  std::vector<Shortfall> shortfalls;

  const TreeNode* find(const std::string& id) const {
    for (const auto& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
};

// Functional validation hook: (golden, candidate) -> report. The default runs
// the random-stimulus comparator with the tree's per-validation vector count.
using Validator =
    std::function<validate::ValidationReport(const hdl::ModuleDecl&, const hdl::ModuleDecl&)>;

Validator make_default_validator(const TreeConfig& cfg);

// Builds golden -> equivalence roots -> leveled mutations. Candidates failing
// validation or duplicating a fingerprint are resampled up to the retry
// budget; unfilled slots are returned as shortfalls, never errors. Nodes
// validate against the golden root. Rebuilding with the same (golden, cfg)
// yields fingerprint-identical node sets at any thread count.
MutationTree build_tree(const hdl::ModuleDecl& golden, const TreeConfig& cfg,
                        const Validator& validator, int threads = 0);
MutationTree build_tree(const hdl::ModuleDecl& golden, const TreeConfig& cfg, int threads = 0);

struct TreeStats {
  uint32_t golden = 0;
  uint32_t equivalents = 0;
  std::map<uint32_t, uint32_t> mutations_by_level;
  std::map<std::string, uint32_t> by_category;
  uint32_t shortfalls = 0;
};
TreeStats tree_stats(const MutationTree& tree);

// All operators eligible for deep levels, as "category:variant".
std::vector<std::string> full_operator_pool();

}  // namespace rtlmut::mutate
