#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rtlmut/hdl/ast.hpp"
#include "rtlmut/util/rng.hpp"

namespace rtlmut::mutate::internal {

// One candidate rewrite bound to a working copy of the module. `apply` edits
// the bound copy in place; `snippet` prints the current text of the target
// node (called before and after apply for the record).
struct Plan {
  std::string path;
  std::function<std::string()> snippet;
  std::function<void(Rng&)> apply;
};

struct ExprCtx {
  hdl::Expr* node = nullptr;
  std::string path;
  int block = -1;            // -1: continuous assign context
  bool sequential = false;
  bool is_rhs_root = false;  // root of an assignment rhs
  bool is_cond_root = false; // root of an if condition
  uint32_t lhs_width = 0;    // assignment target width when is_rhs_root
};

struct StmtCtx {
  hdl::Stmt* node = nullptr;
  std::vector<hdl::Stmt>* owner = nullptr;
  size_t index = 0;
  std::string path;
  int block = -1;
  bool sequential = false;
  bool in_case_arm = false;
};

// Deterministic pre-order walks; enumeration order defines site ordinals.
void walk_exprs(hdl::ModuleDecl& m, const std::function<void(const ExprCtx&)>& fn);
void walk_stmts(hdl::ModuleDecl& m, const std::function<void(const StmtCtx&)>& fn);

// Declared range of a vector signal, if any.
bool decl_range(const hdl::ModuleDecl& m, const std::string& name, int32_t& msb, int32_t& lsb);

// A net name not colliding with any existing declaration.
std::string fresh_net_name(const hdl::ModuleDecl& m, const std::string& base);

std::string sens_text(const hdl::SensitivityList& s);

std::vector<Plan> mutation_plans(hdl::ModuleDecl& m, const std::string& category,
                                 const std::string& variant);
std::vector<Plan> equivalence_plans(hdl::ModuleDecl& m, const std::string& category,
                                    const std::string& variant);

}  // namespace rtlmut::mutate::internal
