#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rtlmut/hdl/ast.hpp"

namespace rtlmut::mutate {

// The 14 semantics-altering bug categories.
enum class MutationCategory {
  LogicGateSwap,
  AlwaysBlockType,
  BlockingNonblocking,
  SignalInversion,
  ConditionBoundary,
  OffByOneIndexing,
  OperatorSwap,
  TimingConstruct,
  ResetLogicError,
  SensitivityListEdit,
  RaceCondition,
  FsmStateCorruption,
  BitWidthMismatch,
  VariableSwapWithinLine,
};

// The 5 semantics-preserving transform categories.
enum class EquivalenceCategory {
  Stylistic,
  Architectural,
  Implementation,
  Optimization,
  Structural,
};

const std::vector<MutationCategory>& all_mutation_categories();
const std::vector<EquivalenceCategory>& all_equivalence_categories();

std::string category_name(MutationCategory c);
std::string category_name(EquivalenceCategory c);
MutationCategory mutation_category_from(const std::string& name);
EquivalenceCategory equivalence_category_from(const std::string& name);

// Concrete rewrite variants per category (documented in docs/operators.md).
const std::vector<std::string>& variants_of(MutationCategory c);
const std::vector<std::string>& variants_of(EquivalenceCategory c);

// A category plus one concrete rewrite rule; `variant` must be one of
// variants_of(category).
struct MutationOperator {
  MutationCategory category;
  std::string variant;
};

struct EquivalenceTransform {
  EquivalenceCategory category;
  std::string variant;
};

// A legal application point. `ordinal` indexes the deterministic enumeration
// order; `path` is the human-readable AST address and is verified on apply.
struct Site {
  uint32_t ordinal = 0;
  std::string path;
  friend bool operator==(const Site&, const Site&) = default;
};

// Full provenance of one rewrite: replaying (operator, site, seed) on the
// parent module reproduces the child exactly.
struct MutationRecord {
  bool is_equivalence = false;
  std::string category;
  std::string variant;
  Site site;
  std::string before;
  std::string after;
  uint64_t seed = 0;
};

class IllegalSiteError : public std::runtime_error {
public:
  explicit IllegalSiteError(const std::string& msg) : std::runtime_error(msg) {}
};

class InapplicableError : public std::runtime_error {
public:
  explicit InapplicableError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ApplyResult {
  hdl::ModuleDecl module;
  MutationRecord record;
};

// Every returned site is a legal application point for the operator; empty
// when the operator does not apply to this module.
std::vector<Site> enumerate_sites(const hdl::ModuleDecl& m, const MutationOperator& op);
std::vector<Site> enumerate_sites(const hdl::ModuleDecl& m, const EquivalenceTransform& t);

// Applies the rewrite at `site`. The result still parses and elaborates;
// rewrites that would break elaboration throw IllegalSiteError instead of
// returning a broken module.
ApplyResult apply_mutation(const hdl::ModuleDecl& m, const MutationOperator& op,
                           const Site& site, uint64_t seed);

// Site selection is uniform over enumerate_sites under `seed`. The result is
// intended semantics-preserving; callers confirm with the validator before
// accepting.
ApplyResult apply_equivalence(const hdl::ModuleDecl& m, const EquivalenceTransform& t,
                              uint64_t seed);
ApplyResult apply_equivalence_at(const hdl::ModuleDecl& m, const EquivalenceTransform& t,
                                 const Site& site, uint64_t seed);

}  // namespace rtlmut::mutate
