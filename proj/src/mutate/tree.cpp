#include "rtlmut/mutate/tree.hpp"

#include <omp.h>

#include <algorithm>
#include <set>

#include "rtlmut/hdl/emit.hpp"
#include "rtlmut/util/rng.hpp"

namespace rtlmut::mutate {

using hdl::ModuleDecl;

std::string node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Golden: return "golden";
    case NodeKind::Equivalent: return "equivalent";
    case NodeKind::Mutation: return "mutation";
  }
  return "?";
}

NodeKind node_kind_from(const std::string& name) {
  if (name == "golden") return NodeKind::Golden;
  if (name == "equivalent") return NodeKind::Equivalent;
  if (name == "mutation") return NodeKind::Mutation;
  throw std::runtime_error("unknown tree node kind '" + name + "'");
}

std::vector<std::string> full_operator_pool() {
  std::vector<std::string> pool;
  for (auto c : all_mutation_categories())
    for (const auto& v : variants_of(c)) pool.push_back(category_name(c) + ":" + v);
  return pool;
}

Validator make_default_validator(const TreeConfig& cfg) {
  validate::RandomStimulusConfig vc;
  vc.vectors = cfg.vectors_per_validation;
  vc.seed = Rng::mix(cfg.seed, 0x7a11da7eULL);
  return [vc](const ModuleDecl& golden, const ModuleDecl& candidate) {
    return validate::compare_serial(sim::SimModel(golden), sim::SimModel(candidate), vc);
  };
}

namespace {

uint64_t salt(const std::string& s) { return fnv1a64(s.data(), s.size()); }

// One sampled rewrite attempt; pure function of (parent, seed).
struct Candidate {
  bool ok = false;
  ModuleDecl module;
  MutationRecord record;
};

Candidate propose_equivalence(const ModuleDecl& parent, uint64_t seed) {
  Candidate c;
  Rng rng(seed);
  // Sample uniformly over applicable transforms so retries are spent on
  // validation failures, not inapplicability.
  std::vector<std::pair<EquivalenceTransform, std::vector<Site>>> applicable;
  for (auto cat : all_equivalence_categories()) {
    for (const auto& v : variants_of(cat)) {
      EquivalenceTransform t{cat, v};
      auto sites = enumerate_sites(parent, t);
      if (!sites.empty()) applicable.emplace_back(t, std::move(sites));
    }
  }
  if (applicable.empty()) return c;
  const auto& [t, sites] = applicable[rng.next_below(applicable.size())];
  const Site& site = sites[rng.next_below(sites.size())];
  try {
    auto res = apply_equivalence_at(parent, t, site, rng.next_u64());
    c.ok = true;
    c.module = std::move(res.module);
    c.record = std::move(res.record);
  } catch (const InapplicableError&) {
  } catch (const IllegalSiteError&) {
  }
  return c;
}

Candidate propose_mutation(const ModuleDecl& parent, uint64_t seed,
                           const std::vector<std::string>& pool) {
  Candidate c;
  Rng rng(seed);
  MutationOperator op;
  std::vector<Site> sites;
  if (pool.empty()) {
    // Level 1: uniform over the categories that apply here, then over that
    // category's applicable variants.
    std::vector<std::pair<MutationOperator, std::vector<Site>>> by_cat;
    std::vector<MutationCategory> cats_with_sites;
    std::map<MutationCategory, std::vector<std::pair<std::string, std::vector<Site>>>> variants_by_cat;
    for (auto cat : all_mutation_categories()) {
      for (const auto& v : variants_of(cat)) {
        auto s = enumerate_sites(parent, MutationOperator{cat, v});
        if (!s.empty()) variants_by_cat[cat].emplace_back(v, std::move(s));
      }
      if (variants_by_cat.count(cat)) cats_with_sites.push_back(cat);
    }
    if (cats_with_sites.empty()) return c;
    op.category = cats_with_sites[rng.next_below(cats_with_sites.size())];
    auto& vs = variants_by_cat[op.category];
    auto& [variant, vsites] = vs[rng.next_below(vs.size())];
    op.variant = variant;
    sites = std::move(vsites);
  } else {
    std::vector<std::pair<MutationOperator, std::vector<Site>>> applicable;
    for (const auto& pick : pool) {
      auto colon = pick.find(':');
      MutationOperator candidate_op{mutation_category_from(pick.substr(0, colon)),
                                    pick.substr(colon + 1)};
      auto s = enumerate_sites(parent, candidate_op);
      if (!s.empty()) applicable.emplace_back(candidate_op, std::move(s));
    }
    if (applicable.empty()) return c;
    auto& [picked, psites] = applicable[rng.next_below(applicable.size())];
    op = picked;
    sites = std::move(psites);
  }
  const Site& site = sites[rng.next_below(sites.size())];
  try {
    auto res = apply_mutation(parent, op, site, rng.next_u64());
    c.ok = true;
    c.module = std::move(res.module);
    c.record = std::move(res.record);
  } catch (const IllegalSiteError&) {
  }
  return c;
}

// One wave of child slots under a fixed parent set. Candidate generation and
// acceptance are serial in slot order; validation fans out across threads.
struct Wave {
  struct Slot {
    uint32_t parent_node = 0;  // index into tree.nodes
    uint32_t slot = 0;
    bool filled = false;
    uint32_t attempts = 0;
  };
  std::vector<Slot> slots;
};

}  // namespace

MutationTree build_tree(const ModuleDecl& golden, const TreeConfig& cfg,
                        const Validator& validator, int threads) {
  if (threads <= 0) threads = omp_get_max_threads();
  MutationTree tree;
  tree.spec_id = golden.name;
  tree.config = cfg;

  std::vector<ModuleDecl> modules;  // parallel to tree.nodes
  std::set<std::string> fingerprints;

  auto add_node = [&](TreeNode node, ModuleDecl m) {
    tree.nodes.push_back(std::move(node));
    modules.push_back(std::move(m));
  };

  {
    TreeNode root;
    root.id = "root";
    root.kind = NodeKind::Golden;
    root.level = 0;
    root.code = hdl::emit(golden);
    root.fingerprint = hdl::ast_fingerprint(golden);
    fingerprints.insert(root.fingerprint);
    add_node(std::move(root), golden);
  }

  // Runs one wave: per open slot, propose+validate per attempt round, accept
  // in slot order. Returns indices of accepted nodes.
  auto run_wave = [&](const std::vector<uint32_t>& parent_nodes, uint32_t per_parent,
                      bool equivalence, uint32_t level,
                      const std::vector<std::string>& pool) {
    std::vector<uint32_t> accepted_nodes;
    Wave wave;
    for (uint32_t p : parent_nodes)
      for (uint32_t s = 0; s < per_parent; ++s) wave.slots.push_back({p, s, false, 0});

    std::vector<uint32_t> next_child_index(tree.nodes.size() + 1, 0);

    for (uint32_t round = 0; round < cfg.retry_budget; ++round) {
      std::vector<uint32_t> open;
      for (uint32_t i = 0; i < wave.slots.size(); ++i)
        if (!wave.slots[i].filled) open.push_back(i);
      if (open.empty()) break;

      // Propose serially (cheap, and seeds are slot-deterministic).
      std::vector<Candidate> cands(open.size());
      for (uint32_t k = 0; k < open.size(); ++k) {
        auto& slot = wave.slots[open[k]];
        const auto& parent_id = tree.nodes[slot.parent_node].id;
        uint64_t seed = Rng::mix(cfg.seed, salt(parent_id + (equivalence ? "#eq" : "#mut") +
                                                std::to_string(slot.slot) + "@" +
                                                std::to_string(round)));
        slot.attempts++;
        cands[k] = equivalence ? propose_equivalence(modules[slot.parent_node], seed)
                               : propose_mutation(modules[slot.parent_node], seed, pool);
      }

      // Validate in parallel; reports are pure functions of the candidate.
      std::vector<validate::ValidationReport> reports(open.size());
      std::vector<uint8_t> usable(open.size(), 0);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (int k = 0; k < static_cast<int>(open.size()); ++k) {
        auto ku = static_cast<uint32_t>(k);
        if (!cands[ku].ok) continue;
        try {
          reports[ku] = validator(modules[0], cands[ku].module);
          usable[ku] = 1;
        } catch (const std::exception&) {
          usable[ku] = 0;
        }
      }

      // Accept serially in slot order; fingerprints dedup across the tree.
      for (uint32_t k = 0; k < open.size(); ++k) {
        auto& slot = wave.slots[open[k]];
        if (!cands[k].ok || !usable[k]) continue;
        if (equivalence) {
          if (reports[k].classification != validate::Classification::Clean) continue;
        } else {
          // A mutation node must carry a positive mismatch count; oscillating
          // candidates cannot be meaningfully stimulated, so resample them.
          if (reports[k].classification != validate::Classification::Mutated) continue;
          if (reports[k].oscillation || reports[k].mismatches == 0) continue;
        }
        std::string fp = hdl::ast_fingerprint(cands[k].module);
        if (!fingerprints.insert(fp).second) continue;

        TreeNode node;
        const auto& parent = tree.nodes[slot.parent_node];
        uint32_t child_no = next_child_index[slot.parent_node]++;
        node.id = equivalence ? ("eq" + std::to_string(accepted_nodes.size()))
                              : (parent.id + "/m" + std::to_string(child_no));
        node.parent_id = parent.id;
        node.kind = equivalence ? NodeKind::Equivalent : NodeKind::Mutation;
        node.level = level;
        node.code = hdl::emit(cands[k].module);
        node.fingerprint = fp;
        node.record = std::move(cands[k].record);
        node.validation = reports[k];
        accepted_nodes.push_back(static_cast<uint32_t>(tree.nodes.size()));
        add_node(std::move(node), std::move(cands[k].module));
        slot.filled = true;
      }
    }

    for (const auto& slot : wave.slots) {
      if (!slot.filled) {
        tree.shortfalls.push_back({tree.nodes[slot.parent_node].id,
                                   equivalence ? "equivalent" : "mutation", level, slot.slot,
                                   slot.attempts});
      }
    }
    return accepted_nodes;
  };

  // Wave 1: semantics-preserving roots off the golden.
  std::vector<uint32_t> roots = run_wave({0}, cfg.n_equivalents, true, 0, {});
  if (roots.empty()) roots = {0};  // mutate the golden directly

  // Mutation waves.
  std::vector<std::string> pool =
      cfg.level2_operator_pool.empty() ? full_operator_pool() : cfg.level2_operator_pool;
  std::vector<uint32_t> parents = roots;
  for (uint32_t depth = 1; depth <= cfg.max_depth && !parents.empty(); ++depth) {
    uint32_t per_parent = depth == 1 ? cfg.n_level1 : cfg.level2_per_parent;
    if (per_parent == 0) break;
    parents = run_wave(parents, per_parent, false, depth,
                       depth == 1 ? std::vector<std::string>{} : pool);
  }

  return tree;
}

MutationTree build_tree(const ModuleDecl& golden, const TreeConfig& cfg, int threads) {
  return build_tree(golden, cfg, make_default_validator(cfg), threads);
}

TreeStats tree_stats(const MutationTree& tree) {
  TreeStats st;
  for (const auto& n : tree.nodes) {
    switch (n.kind) {
      case NodeKind::Golden: ++st.golden; break;
      case NodeKind::Equivalent: ++st.equivalents; break;
      case NodeKind::Mutation: ++st.mutations_by_level[n.level]; break;
    }
    if (n.record) ++st.by_category[n.record->category];
  }
  st.shortfalls = static_cast<uint32_t>(tree.shortfalls.size());
  return st;
}

}  // namespace rtlmut::mutate
