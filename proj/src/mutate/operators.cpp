#include "rtlmut/mutate/mutate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rtlmut/hdl/emit.hpp"
#include "rtlmut/hdl/parser.hpp"
#include "rtlmut/hdl/walk.hpp"
#include "rewrite_internal.hpp"

namespace rtlmut::mutate {

using hdl::BinaryOp;
using hdl::BitVec;
using hdl::EdgeKind;
using hdl::Expr;
using hdl::ExprKind;
using hdl::ModuleDecl;
using hdl::Stmt;
using hdl::StmtKind;
using hdl::UnaryOp;
using internal::ExprCtx;
using internal::Plan;
using internal::StmtCtx;

// ---------------------------------------------------------------------------
// Category / variant tables
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::pair<MutationCategory, const char*>> kMutationNames = {
    {MutationCategory::LogicGateSwap, "logic_gate_swap"},
    {MutationCategory::AlwaysBlockType, "always_block_type"},
    {MutationCategory::BlockingNonblocking, "blocking_nonblocking"},
    {MutationCategory::SignalInversion, "signal_inversion"},
    {MutationCategory::ConditionBoundary, "condition_boundary"},
    {MutationCategory::OffByOneIndexing, "off_by_one_indexing"},
    {MutationCategory::OperatorSwap, "operator_swap"},
    {MutationCategory::TimingConstruct, "timing_construct"},
    {MutationCategory::ResetLogicError, "reset_logic_error"},
    {MutationCategory::SensitivityListEdit, "sensitivity_list"},
    {MutationCategory::RaceCondition, "race_condition"},
    {MutationCategory::FsmStateCorruption, "fsm_state_corruption"},
    {MutationCategory::BitWidthMismatch, "bit_width_mismatch"},
    {MutationCategory::VariableSwapWithinLine, "variable_swap_within_line"},
};

const std::vector<std::pair<EquivalenceCategory, const char*>> kEquivalenceNames = {
    {EquivalenceCategory::Stylistic, "stylistic"},
    {EquivalenceCategory::Architectural, "architectural"},
    {EquivalenceCategory::Implementation, "implementation"},
    {EquivalenceCategory::Optimization, "optimization"},
    {EquivalenceCategory::Structural, "structural"},
};

const std::map<MutationCategory, std::vector<std::string>> kMutationVariants = {
    {MutationCategory::LogicGateSwap, {"and_or", "xor_swap", "logical"}},
    {MutationCategory::AlwaysBlockType, {"comb_to_seq", "seq_to_comb"}},
    {MutationCategory::BlockingNonblocking, {"toggle"}},
    {MutationCategory::SignalInversion, {"invert_rhs", "invert_ref", "drop_invert", "invert_cond"}},
    {MutationCategory::ConditionBoundary, {"lt_le", "gt_ge"}},
    {MutationCategory::OffByOneIndexing, {"part_up", "part_down", "bit_up", "bit_down"}},
    {MutationCategory::OperatorSwap, {"add_sub", "mul_to_add", "shift_dir", "eq_ne"}},
    {MutationCategory::TimingConstruct, {"edge_flip"}},
    {MutationCategory::ResetLogicError, {"drop_branch", "invert_polarity", "wrong_value"}},
    {MutationCategory::SensitivityListEdit, {"drop_entry", "star_to_incomplete"}},
    {MutationCategory::RaceCondition, {"nba_to_blocking"}},
    {MutationCategory::FsmStateCorruption, {"case_label", "next_state_value", "param_value"}},
    {MutationCategory::BitWidthMismatch, {"narrow_net"}},
    {MutationCategory::VariableSwapWithinLine, {"swap_refs"}},
};

const std::map<EquivalenceCategory, std::vector<std::string>> kEquivalenceVariants = {
    {EquivalenceCategory::Stylistic, {"rename_nets", "reorder_decls"}},
    {EquivalenceCategory::Architectural, {"assign_to_always", "always_to_assign"}},
    {EquivalenceCategory::Implementation, {"if_to_case", "case_to_if"}},
    {EquivalenceCategory::Optimization, {"demorgan", "mul2_shift", "double_not"}},
    {EquivalenceCategory::Structural, {"factor_rhs", "reorder_items"}},
};

}  // namespace

const std::vector<MutationCategory>& all_mutation_categories() {
  static const std::vector<MutationCategory> v = [] {
    std::vector<MutationCategory> out;
    for (const auto& [c, n] : kMutationNames) out.push_back(c);
    return out;
  }();
  return v;
}

const std::vector<EquivalenceCategory>& all_equivalence_categories() {
  static const std::vector<EquivalenceCategory> v = [] {
    std::vector<EquivalenceCategory> out;
    for (const auto& [c, n] : kEquivalenceNames) out.push_back(c);
    return out;
  }();
  return v;
}

std::string category_name(MutationCategory c) {
  for (const auto& [cat, n] : kMutationNames)
    if (cat == c) return n;
  return "?";
}

std::string category_name(EquivalenceCategory c) {
  for (const auto& [cat, n] : kEquivalenceNames)
    if (cat == c) return n;
  return "?";
}

MutationCategory mutation_category_from(const std::string& name) {
  for (const auto& [cat, n] : kMutationNames)
    if (name == n) return cat;
  throw InapplicableError("unknown mutation category '" + name + "'");
}

EquivalenceCategory equivalence_category_from(const std::string& name) {
  for (const auto& [cat, n] : kEquivalenceNames)
    if (name == n) return cat;
  throw InapplicableError("unknown equivalence category '" + name + "'");
}

const std::vector<std::string>& variants_of(MutationCategory c) {
  return kMutationVariants.at(c);
}

const std::vector<std::string>& variants_of(EquivalenceCategory c) {
  return kEquivalenceVariants.at(c);
}

// ---------------------------------------------------------------------------
// Walkers
// ---------------------------------------------------------------------------

namespace internal {

namespace {

void walk_expr_tree(Expr& e, const std::string& path, ExprCtx proto,
                    const std::function<void(const ExprCtx&)>& fn, bool root) {
  ExprCtx ctx = proto;
  ctx.node = &e;
  ctx.path = path;
  ctx.is_rhs_root = root && proto.is_rhs_root;
  ctx.is_cond_root = root && proto.is_cond_root;
  fn(ctx);
  for (size_t i = 0; i < e.args.size(); ++i)
    walk_expr_tree(e.args[i], path + ".a" + std::to_string(i), proto, fn, false);
}

struct BodyWalker {
  const ModuleDecl* m;
  const std::function<void(const StmtCtx&)>* stmt_fn;
  const std::function<void(const ExprCtx&)>* expr_fn;
  int block;
  bool sequential;

  void body(std::vector<Stmt>& stmts, const std::string& path, bool in_case_arm) const {
    for (size_t i = 0; i < stmts.size(); ++i) {
      Stmt& s = stmts[i];
      std::string sp = path + "[" + std::to_string(i) + "]";
      if (stmt_fn) {
        StmtCtx ctx;
        ctx.node = &s;
        ctx.owner = &stmts;
        ctx.index = i;
        ctx.path = sp;
        ctx.block = block;
        ctx.sequential = sequential;
        ctx.in_case_arm = in_case_arm;
        (*stmt_fn)(ctx);
      }
      switch (s.kind) {
        case StmtKind::Assign:
          if (expr_fn) {
            ExprCtx proto;
            proto.block = block;
            proto.sequential = sequential;
            proto.is_rhs_root = true;
            proto.lhs_width = m->width_of(s.lhs);
            walk_expr_tree(s.rhs, sp + ".rhs", proto, *expr_fn, true);
          }
          break;
        case StmtKind::If: {
          if (expr_fn) {
            ExprCtx proto;
            proto.block = block;
            proto.sequential = sequential;
            proto.is_cond_root = true;
            walk_expr_tree(s.cond, sp + ".cond", proto, *expr_fn, true);
          }
          body(s.then_body, sp + ".then", in_case_arm);
          body(s.else_body, sp + ".else", in_case_arm);
          break;
        }
        case StmtKind::Case: {
          if (expr_fn) {
            ExprCtx proto;
            proto.block = block;
            proto.sequential = sequential;
            walk_expr_tree(s.subject, sp + ".subject", proto, *expr_fn, true);
          }
          for (size_t a = 0; a < s.arms.size(); ++a)
            body(s.arms[a].body, sp + ".arm[" + std::to_string(a) + "]", true);
          body(s.default_body, sp + ".default", in_case_arm);
          break;
        }
      }
    }
  }
};

void walk_module(ModuleDecl& m, const std::function<void(const StmtCtx&)>* stmt_fn,
                 const std::function<void(const ExprCtx&)>* expr_fn) {
  if (expr_fn) {
    for (size_t i = 0; i < m.assigns.size(); ++i) {
      ExprCtx proto;
      proto.block = -1;
      proto.is_rhs_root = true;
      proto.lhs_width = m.width_of(m.assigns[i].lhs);
      walk_expr_tree(m.assigns[i].rhs, "assign[" + std::to_string(i) + "].rhs", proto, *expr_fn,
                     true);
    }
  }
  for (size_t b = 0; b < m.blocks.size(); ++b) {
    BodyWalker w{&m, stmt_fn, expr_fn, static_cast<int>(b), m.blocks[b].is_sequential()};
    w.body(m.blocks[b].body, "block[" + std::to_string(b) + "].s", false);
  }
}

}  // namespace

void walk_exprs(ModuleDecl& m, const std::function<void(const ExprCtx&)>& fn) {
  walk_module(m, nullptr, &fn);
}

void walk_stmts(ModuleDecl& m, const std::function<void(const StmtCtx&)>& fn) {
  walk_module(m, &fn, nullptr);
}

bool decl_range(const ModuleDecl& m, const std::string& name, int32_t& msb, int32_t& lsb) {
  if (const auto* p = m.find_port(name)) {
    msb = p->msb;
    lsb = p->lsb;
    return true;
  }
  if (const auto* d = m.find_net(name)) {
    msb = d->msb;
    lsb = d->lsb;
    return true;
  }
  return false;
}

std::string fresh_net_name(const ModuleDecl& m, const std::string& base) {
  auto taken = [&](const std::string& n) {
    return m.find_port(n) || m.find_net(n) || m.find_param(n);
  };
  if (!taken(base)) return base;
  for (int k = 0;; ++k) {
    std::string n = base + std::to_string(k);
    if (!taken(n)) return n;
  }
}

std::string sens_text(const hdl::SensitivityList& s) {
  if (s.star) return "@(*)";
  std::string out = "@(";
  for (size_t i = 0; i < s.entries.size(); ++i) {
    if (i) out += " or ";
    if (s.entries[i].edge == EdgeKind::Posedge) out += "posedge ";
    if (s.entries[i].edge == EdgeKind::Negedge) out += "negedge ";
    out += s.entries[i].signal;
  }
  return out + ")";
}

}  // namespace internal

// ---------------------------------------------------------------------------
// Mutation plan builders
// ---------------------------------------------------------------------------

namespace {

std::function<std::string()> expr_snippet(Expr* node) {
  return [node] { return hdl::emit_expr(*node); };
}

std::function<std::string()> stmt_snippet(Stmt* node) {
  return [node] {
    std::string s = hdl::emit_stmt(*node);
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
  };
}

// Binary operator substitution shared by several categories.
void plan_binop_swap(ModuleDecl& m, std::vector<Plan>& plans,
                     const std::vector<std::pair<BinaryOp, BinaryOp>>& swaps) {
  internal::walk_exprs(m, [&](const ExprCtx& c) {
    if (c.node->kind != ExprKind::Binary) return;
    for (const auto& [from, to] : swaps) {
      if (c.node->bop == from) {
        Expr* node = c.node;
        BinaryOp target = to;
        plans.push_back({c.path, expr_snippet(node), [node, target](Rng&) { node->bop = target; }});
        return;
      }
    }
  });
}

void plans_logic_gate_swap(ModuleDecl& m, const std::string& variant, std::vector<Plan>& plans) {
  if (variant == "and_or")
    plan_binop_swap(m, plans, {{BinaryOp::And, BinaryOp::Or}, {BinaryOp::Or, BinaryOp::And}});
  else if (variant == "xor_swap")
    plan_binop_swap(m, plans, {{BinaryOp::Xor, BinaryOp::And}});
  else if (variant == "logical")
    plan_binop_swap(m, plans,
                    {{BinaryOp::LogicAnd, BinaryOp::LogicOr}, {BinaryOp::LogicOr, BinaryOp::LogicAnd}});
}

void plans_operator_swap(ModuleDecl& m, const std::string& variant, std::vector<Plan>& plans) {
  if (variant == "add_sub")
    plan_binop_swap(m, plans, {{BinaryOp::Add, BinaryOp::Sub}, {BinaryOp::Sub, BinaryOp::Add}});
  else if (variant == "mul_to_add")
    plan_binop_swap(m, plans, {{BinaryOp::Mul, BinaryOp::Add}});
  else if (variant == "shift_dir")
    plan_binop_swap(m, plans, {{BinaryOp::Shl, BinaryOp::Shr}, {BinaryOp::Shr, BinaryOp::Shl}});
  else if (variant == "eq_ne")
    plan_binop_swap(m, plans, {{BinaryOp::Eq, BinaryOp::Ne}, {BinaryOp::Ne, BinaryOp::Eq}});
}

void plans_condition_boundary(ModuleDecl& m, const std::string& variant, std::vector<Plan>& plans) {
  if (variant == "lt_le")
    plan_binop_swap(m, plans, {{BinaryOp::Lt, BinaryOp::Le}, {BinaryOp::Le, BinaryOp::Lt}});
  else if (variant == "gt_ge")
    plan_binop_swap(m, plans, {{BinaryOp::Gt, BinaryOp::Ge}, {BinaryOp::Ge, BinaryOp::Gt}});
}

void plans_signal_inversion(ModuleDecl& m, const std::string& variant, std::vector<Plan>& plans) {
  internal::walk_exprs(m, [&](const ExprCtx& c) {
    Expr* node = c.node;
    if (variant == "invert_rhs" && c.is_rhs_root) {
      plans.push_back({c.path, expr_snippet(node), [node](Rng&) {
                         Expr inner = std::move(*node);
                         *node = Expr::unary(UnaryOp::Not, std::move(inner));
                       }});
    } else if (variant == "invert_ref" && node->kind == ExprKind::Ref && !m.find_param(node->name)) {
      plans.push_back({c.path, expr_snippet(node), [node](Rng&) {
                         Expr inner = std::move(*node);
                         *node = Expr::unary(UnaryOp::Not, std::move(inner));
                       }});
    } else if (variant == "drop_invert" && node->kind == ExprKind::Unary &&
               node->uop == UnaryOp::Not) {
      plans.push_back({c.path, expr_snippet(node), [node](Rng&) {
                         Expr inner = std::move(node->args[0]);
                         *node = std::move(inner);
                       }});
    } else if (variant == "invert_cond" && c.is_cond_root) {
      plans.push_back({c.path, expr_snippet(node), [node](Rng&) {
                         Expr inner = std::move(*node);
                         *node = Expr::unary(UnaryOp::LogicNot, std::move(inner));
                       }});
    }
  });
}

void plans_off_by_one(ModuleDecl& m, const std::string& variant, std::vector<Plan>& plans) {
  internal::walk_exprs(m, [&](const ExprCtx& c) {
    Expr* node = c.node;
    int32_t dmsb, dlsb;
    if (node->kind == ExprKind::PartSelect) {
      if (!internal::decl_range(m, node->name, dmsb, dlsb)) return;
      if (variant == "part_up" && node->msb + 1 <= dmsb) {
        plans.push_back({c.path, expr_snippet(node), [node](Rng&) {
                           ++node->msb;
                           ++node->lsb;
                         }});
      } else if (variant == "part_down" && node->lsb - 1 >= dlsb) {
        plans.push_back({c.path, expr_snippet(node), [node](Rng&) {
                           --node->msb;
                           --node->lsb;
                         }});
      }
    } else if (node->kind == ExprKind::BitSelect && node->args[0].kind == ExprKind::Literal) {
      if (!internal::decl_range(m, node->name, dmsb, dlsb)) return;
      auto idx = static_cast<int64_t>(node->args[0].literal.bits);
      if (variant == "bit_up" && idx + 1 <= dmsb) {
        plans.push_back({c.path, expr_snippet(node), [node](Rng&) {
                           node->args[0].literal =
                               BitVec(node->args[0].literal.width, node->args[0].literal.bits + 1);
                         }});
      } else if (variant == "bit_down" && idx - 1 >= dlsb && idx >= 1) {
        plans.push_back({c.path, expr_snippet(node), [node](Rng&) {
                           node->args[0].literal =
                               BitVec(node->args[0].literal.width, node->args[0].literal.bits - 1);
                         }});
      }
    }
  });
}

void plans_blocking_nonblocking(ModuleDecl& m, std::vector<Plan>& plans) {
  internal::walk_stmts(m, [&](const StmtCtx& c) {
    if (c.node->kind != StmtKind::Assign) return;
    Stmt* node = c.node;
    plans.push_back({c.path, stmt_snippet(node), [node](Rng&) {
                       node->assign_kind = node->assign_kind == hdl::AssignKind::Blocking
                                               ? hdl::AssignKind::NonBlocking
                                               : hdl::AssignKind::Blocking;
                     }});
  });
}

void plans_always_block_type(ModuleDecl& m, const std::string& variant, std::vector<Plan>& plans) {
  std::vector<std::string> one_bit_inputs;
  for (const auto& p : m.ports)
    if (p.dir == hdl::Direction::Input && p.width() == 1) one_bit_inputs.push_back(p.name);

  for (size_t b = 0; b < m.blocks.size(); ++b) {
    hdl::AlwaysBlock* blk = &m.blocks[b];
    std::string path = "block[" + std::to_string(b) + "].sens";
    auto snip = [blk] { return internal::sens_text(blk->sens); };
    if (variant == "comb_to_seq" && !blk->is_sequential() && !one_bit_inputs.empty()) {
      auto clocks = one_bit_inputs;
      plans.push_back({path, snip, [blk, clocks](Rng& rng) {
                         // Prefer a conventional clock name when one exists.
                         std::string pick = clocks[rng.next_below(clocks.size())];
                         for (const auto& c : clocks)
                           if (c == "clk" || c == "clock") pick = c;
                         blk->sens.star = false;
                         blk->sens.entries = {{EdgeKind::Posedge, pick}};
                       }});
    } else if (variant == "seq_to_comb" && blk->is_sequential()) {
      plans.push_back({path, snip, [blk](Rng&) {
                         blk->sens.star = true;
                         blk->sens.entries.clear();
                       }});
    }
  }
}

void plans_timing_construct(ModuleDecl& m, std::vector<Plan>& plans) {
  for (size_t b = 0; b < m.blocks.size(); ++b) {
    hdl::AlwaysBlock* blk = &m.blocks[b];
    for (size_t k = 0; k < blk->sens.entries.size(); ++k) {
      if (blk->sens.entries[k].edge == EdgeKind::Level) continue;
      std::string path = "block[" + std::to_string(b) + "].sens[" + std::to_string(k) + "]";
      auto snip = [blk] { return internal::sens_text(blk->sens); };
      plans.push_back({path, snip, [blk, k](Rng&) {
                         auto& e = blk->sens.entries[k];
                         e.edge = e.edge == EdgeKind::Posedge ? EdgeKind::Negedge : EdgeKind::Posedge;
                       }});
    }
  }
}

// Signals that look like resets from the perspective of one sequential block:
// non-clock edge entries plus anything named rst*/reset*.
std::set<std::string> resetish_signals(const ModuleDecl& m, const hdl::AlwaysBlock& blk) {
  std::set<std::string> out;
  auto clock = hdl::find_clock_port(m.ports);
  for (const auto& e : blk.sens.entries) {
    if (e.edge == EdgeKind::Level) continue;
    if (clock && e.signal == *clock) continue;
    if (e.signal.starts_with("clk") || e.signal.starts_with("clock")) continue;
    out.insert(e.signal);
  }
  for (const auto& p : m.ports)
    if (p.name.starts_with("rst") || p.name.starts_with("reset")) out.insert(p.name);
  return out;
}

void collect_literal_assigns(std::vector<Stmt>& body, std::vector<Stmt*>& out) {
  for (auto& s : body) {
    switch (s.kind) {
      case StmtKind::Assign:
        if (s.rhs.kind == ExprKind::Literal) out.push_back(&s);
        break;
      case StmtKind::If:
        collect_literal_assigns(s.then_body, out);
        collect_literal_assigns(s.else_body, out);
        break;
      case StmtKind::Case:
        for (auto& arm : s.arms) collect_literal_assigns(arm.body, out);
        collect_literal_assigns(s.default_body, out);
        break;
    }
  }
}

void plans_reset_logic_error(ModuleDecl& m, const std::string& variant, std::vector<Plan>& plans) {
  internal::walk_stmts(m, [&](const StmtCtx& c) {
    if (c.node->kind != StmtKind::If || !c.sequential) return;
    auto resetish = resetish_signals(m, m.blocks[static_cast<size_t>(c.block)]);
    std::set<std::string> reads;
    hdl::collect_reads(c.node->cond, reads);
    bool touches_reset = false;
    for (const auto& r : reads)
      if (resetish.count(r)) touches_reset = true;
    if (!touches_reset) return;

    Stmt* node = c.node;
    if (variant == "drop_branch") {
      auto* owner = c.owner;
      size_t index = c.index;
      // The statement is spliced away, so the snippet prints from the owning
      // list rather than through a pointer to the (gone) node.
      auto snip = [owner, index] {
        if (index >= owner->size()) return std::string("(removed)");
        std::string s = hdl::emit_stmt((*owner)[index]);
        if (!s.empty() && s.back() == '\n') s.pop_back();
        return s;
      };
      plans.push_back({c.path, snip, [owner, index](Rng&) {
                         Stmt victim = std::move((*owner)[index]);
                         owner->erase(owner->begin() + static_cast<ptrdiff_t>(index));
                         owner->insert(owner->begin() + static_cast<ptrdiff_t>(index),
                                       std::make_move_iterator(victim.else_body.begin()),
                                       std::make_move_iterator(victim.else_body.end()));
                       }});
    } else if (variant == "invert_polarity") {
      plans.push_back({c.path + ".cond", expr_snippet(&node->cond), [node](Rng&) {
                         if (node->cond.kind == ExprKind::Unary &&
                             (node->cond.uop == UnaryOp::LogicNot || node->cond.uop == UnaryOp::Not)) {
                           Expr inner = std::move(node->cond.args[0]);
                           node->cond = std::move(inner);
                         } else {
                           Expr inner = std::move(node->cond);
                           node->cond = Expr::unary(UnaryOp::LogicNot, std::move(inner));
                         }
                       }});
    } else if (variant == "wrong_value") {
      std::vector<Stmt*> lits;
      collect_literal_assigns(node->then_body, lits);
      if (lits.empty()) return;
      plans.push_back({c.path + ".then", stmt_snippet(node), [lits](Rng& rng) {
                         Stmt* target = lits[rng.next_below(lits.size())];
                         auto& v = target->rhs.literal;
                         v = BitVec(v.width, v.bits ^ 1);
                       }});
    }
  });
}

void plans_sensitivity_list(ModuleDecl& m, const std::string& variant, std::vector<Plan>& plans) {
  for (size_t b = 0; b < m.blocks.size(); ++b) {
    hdl::AlwaysBlock* blk = &m.blocks[b];
    std::string base = "block[" + std::to_string(b) + "].sens";
    auto snip = [blk] { return internal::sens_text(blk->sens); };
    if (variant == "drop_entry") {
      if (blk->sens.star || blk->sens.entries.size() < 2) continue;
      for (size_t k = 0; k < blk->sens.entries.size(); ++k) {
        plans.push_back({base + "[" + std::to_string(k) + "]", snip, [blk, k](Rng&) {
                           blk->sens.entries.erase(blk->sens.entries.begin() +
                                                   static_cast<ptrdiff_t>(k));
                         }});
      }
    } else if (variant == "star_to_incomplete") {
      if (!blk->sens.star) continue;
      std::set<std::string> reads;
      hdl::collect_reads(blk->body, reads);
      std::vector<std::string> signals;
      for (const auto& r : reads)
        if (!m.find_param(r)) signals.push_back(r);
      if (signals.size() < 2) continue;
      for (const auto& dropped : signals) {
        plans.push_back({base + ".drop." + dropped, snip, [blk, signals, dropped](Rng&) {
                           blk->sens.star = false;
                           blk->sens.entries.clear();
                           for (const auto& s : signals)
                             if (s != dropped) blk->sens.entries.push_back({EdgeKind::Level, s});
                         }});
      }
    }
  }
}

void plans_race_condition(ModuleDecl& m, std::vector<Plan>& plans) {
  // Per sequential block: reads of every condition/subject plus each
  // assignment's rhs, keyed so a statement's own rhs does not count.
  struct BlockReads {
    std::set<std::string> structural;                 // conds + subjects
    std::vector<std::pair<Stmt*, std::set<std::string>>> assign_reads;
  };
  std::map<int, BlockReads> per_block;
  internal::walk_stmts(m, [&](const StmtCtx& c) {
    if (!c.sequential) return;
    auto& br = per_block[c.block];
    if (c.node->kind == StmtKind::Assign) {
      std::set<std::string> reads;
      hdl::collect_reads(c.node->rhs, reads);
      br.assign_reads.emplace_back(c.node, std::move(reads));
    } else if (c.node->kind == StmtKind::If) {
      hdl::collect_reads(c.node->cond, br.structural);
    } else {
      hdl::collect_reads(c.node->subject, br.structural);
    }
  });
  internal::walk_stmts(m, [&](const StmtCtx& c) {
    if (!c.sequential || c.node->kind != StmtKind::Assign) return;
    if (c.node->assign_kind != hdl::AssignKind::NonBlocking) return;
    const auto& br = per_block[c.block];
    bool read_elsewhere = br.structural.count(c.node->lhs) > 0;
    for (const auto& [stmt, reads] : br.assign_reads)
      if (stmt != c.node && reads.count(c.node->lhs)) read_elsewhere = true;
    if (!read_elsewhere) return;
    Stmt* node = c.node;
    plans.push_back({c.path, stmt_snippet(node),
                     [node](Rng&) { node->assign_kind = hdl::AssignKind::Blocking; }});
  });
}

void plans_fsm_state_corruption(ModuleDecl& m, const std::string& variant,
                                std::vector<Plan>& plans) {
  if (variant == "param_value") {
    // Parameters used as case labels anywhere in the module.
    std::set<std::string> label_params;
    internal::walk_stmts(m, [&](const StmtCtx& c) {
      if (c.node->kind != StmtKind::Case) return;
      for (const auto& arm : c.node->arms)
        for (const auto& l : arm.labels)
          if (l.kind == ExprKind::Ref) label_params.insert(l.name);
    });
    for (size_t i = 0; i < m.params.size(); ++i) {
      if (!label_params.count(m.params[i].name)) continue;
      hdl::ParamDecl* p = &m.params[i];
      plans.push_back({"param[" + std::to_string(i) + "]",
                       [p] { return "parameter " + p->name + " = " + hdl::emit_literal(p->value); },
                       [p](Rng&) { p->value = BitVec(p->value.width, p->value.bits + 1); }});
    }
    return;
  }
  internal::walk_stmts(m, [&](const StmtCtx& c) {
    if (variant == "case_label" && c.node->kind == StmtKind::Case) {
      Stmt* node = c.node;
      // All label values currently in use, to steer the bump away from them.
      for (size_t a = 0; a < node->arms.size(); ++a) {
        for (size_t l = 0; l < node->arms[a].labels.size(); ++l) {
          if (node->arms[a].labels[l].kind != ExprKind::Literal) continue;
          uint32_t w = node->arms[a].labels[l].literal.width;
          size_t label_count = 0;
          for (const auto& arm : node->arms) label_count += arm.labels.size();
          if (w < 16 && (1ULL << w) <= label_count) continue;  // no free encoding
          std::string path = c.path + ".arm[" + std::to_string(a) + "].label[" + std::to_string(l) + "]";
          Expr* lab = &node->arms[a].labels[l];
          plans.push_back({path, expr_snippet(lab), [node, lab](Rng&) {
                             std::set<uint64_t> taken;
                             for (const auto& arm : node->arms)
                               for (const auto& e : arm.labels)
                                 if (e.kind == ExprKind::Literal) taken.insert(e.literal.bits);
                             uint64_t v = lab->literal.bits;
                             for (int tries = 0; tries < 256; ++tries) {
                               v = (v + 1) & BitVec::mask(lab->literal.width);
                               if (!taken.count(v)) break;
                             }
                             lab->literal = BitVec(lab->literal.width, v);
                           }});
        }
      }
    } else if (variant == "next_state_value" && c.node->kind == StmtKind::Assign &&
               c.in_case_arm && c.node->rhs.kind == ExprKind::Literal) {
      Stmt* node = c.node;
      plans.push_back({c.path, stmt_snippet(node), [node](Rng&) {
                         auto& v = node->rhs.literal;
                         v = BitVec(v.width, v.bits + 1);
                       }});
    }
  });
}

void plans_bit_width_mismatch(ModuleDecl& m, std::vector<Plan>& plans) {
  for (size_t i = 0; i < m.nets.size(); ++i) {
    hdl::NetDecl* d = &m.nets[i];
    if (d->width() < 2) continue;
    // Narrowing must keep every constant select in range.
    bool safe = true;
    int32_t new_msb = d->msb - 1;
    internal::walk_exprs(m, [&](const ExprCtx& c) {
      const Expr& e = *c.node;
      if (e.kind == ExprKind::PartSelect && e.name == d->name && e.msb > new_msb) safe = false;
      if (e.kind == ExprKind::BitSelect && e.name == d->name &&
          e.args[0].kind == ExprKind::Literal &&
          static_cast<int64_t>(e.args[0].literal.bits) > new_msb)
        safe = false;
    });
    if (!safe) continue;
    plans.push_back({"net[" + std::to_string(i) + "]",
                     [d] {
                       return std::string(d->is_reg ? "reg" : "wire") + " [" +
                              std::to_string(d->msb) + ":" + std::to_string(d->lsb) + "] " + d->name;
                     },
                     [d](Rng&) { --d->msb; }});
  }
}

// Distinct non-parameter signal names in appearance order.
void collect_ref_names(const Expr& e, const ModuleDecl& m, std::vector<std::string>& out) {
  auto add = [&](const std::string& n) {
    if (m.find_param(n)) return;
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  switch (e.kind) {
    case ExprKind::Ref:
    case ExprKind::PartSelect:
      add(e.name);
      break;
    case ExprKind::BitSelect:
      add(e.name);
      break;
    default:
      break;
  }
  for (const auto& a : e.args) collect_ref_names(a, m, out);
}

void rename_in_expr(Expr& e, const std::string& from, const std::string& to) {
  if ((e.kind == ExprKind::Ref || e.kind == ExprKind::BitSelect ||
       e.kind == ExprKind::PartSelect) &&
      e.name == from)
    e.name = to;
  for (auto& a : e.args) rename_in_expr(a, from, to);
}

void plans_variable_swap(ModuleDecl& m, std::vector<Plan>& plans) {
  internal::walk_exprs(m, [&](const ExprCtx& c) {
    if (!c.is_rhs_root && !c.is_cond_root) return;
    std::vector<std::string> names;
    collect_ref_names(*c.node, m, names);
    if (names.size() < 2) return;
    Expr* node = c.node;
    plans.push_back({c.path, expr_snippet(node), [node, names](Rng& rng) {
                       size_t n = names.size();
                       uint64_t pair_count = n * (n - 1) / 2;
                       uint64_t k = rng.next_below(pair_count);
                       size_t i = 0, j = 1;
                       for (uint64_t seen = 0; i + 1 < n; ++i) {
                         uint64_t row = n - 1 - i;
                         if (k < seen + row) {
                           j = i + 1 + static_cast<size_t>(k - seen);
                           break;
                         }
                         seen += row;
                       }
                       const std::string tmp = "__swap_tmp__";
                       rename_in_expr(*node, names[i], tmp);
                       rename_in_expr(*node, names[j], names[i]);
                       rename_in_expr(*node, tmp, names[j]);
                     }});
  });
}

}  // namespace

namespace internal {

std::vector<Plan> mutation_plans(ModuleDecl& m, const std::string& category,
                                 const std::string& variant) {
  std::vector<Plan> plans;
  switch (mutation_category_from(category)) {
    case MutationCategory::LogicGateSwap: plans_logic_gate_swap(m, variant, plans); break;
    case MutationCategory::OperatorSwap: plans_operator_swap(m, variant, plans); break;
    case MutationCategory::ConditionBoundary: plans_condition_boundary(m, variant, plans); break;
    case MutationCategory::SignalInversion: plans_signal_inversion(m, variant, plans); break;
    case MutationCategory::OffByOneIndexing: plans_off_by_one(m, variant, plans); break;
    case MutationCategory::BlockingNonblocking: plans_blocking_nonblocking(m, plans); break;
    case MutationCategory::AlwaysBlockType: plans_always_block_type(m, variant, plans); break;
    case MutationCategory::TimingConstruct: plans_timing_construct(m, plans); break;
    case MutationCategory::ResetLogicError: plans_reset_logic_error(m, variant, plans); break;
    case MutationCategory::SensitivityListEdit: plans_sensitivity_list(m, variant, plans); break;
    case MutationCategory::RaceCondition: plans_race_condition(m, plans); break;
    case MutationCategory::FsmStateCorruption: plans_fsm_state_corruption(m, variant, plans); break;
    case MutationCategory::BitWidthMismatch: plans_bit_width_mismatch(m, plans); break;
    case MutationCategory::VariableSwapWithinLine: plans_variable_swap(m, plans); break;
  }
  return plans;
}

}  // namespace internal

// ---------------------------------------------------------------------------
// Public surface
// ---------------------------------------------------------------------------

namespace {

void check_variant(const std::vector<std::string>& variants, const std::string& v,
                   const std::string& what) {
  if (std::find(variants.begin(), variants.end(), v) == variants.end())
    throw InapplicableError("unknown " + what + " variant '" + v + "'");
}

std::vector<Site> sites_from(const std::vector<Plan>& plans) {
  std::vector<Site> sites;
  sites.reserve(plans.size());
  for (uint32_t i = 0; i < plans.size(); ++i) sites.push_back({i, plans[i].path});
  return sites;
}

// Applies in place; `working` must be the module the plans were built
// against, and must not move until the plans are dead.
MutationRecord apply_plan(ModuleDecl& working, std::vector<Plan>& plans, const Site& site,
                          uint64_t seed, bool is_equivalence, const std::string& category,
                          const std::string& variant) {
  if (site.ordinal >= plans.size() || plans[site.ordinal].path != site.path)
    throw IllegalSiteError("site " + std::to_string(site.ordinal) + " ('" + site.path +
                           "') is not a legal " + category + "/" + variant + " site");
  Plan& plan = plans[site.ordinal];
  MutationRecord rec;
  rec.is_equivalence = is_equivalence;
  rec.category = category;
  rec.variant = variant;
  rec.site = site;
  rec.seed = seed;
  rec.before = plan.snippet();
  Rng rng(Rng::mix(seed, site.ordinal));
  plan.apply(rng);
  rec.after = plan.snippet();
  try {
    hdl::elaborate(working);
  } catch (const hdl::HdlError& e) {
    throw IllegalSiteError("rewrite at '" + site.path + "' no longer elaborates: " + e.what());
  }
  return rec;
}

}  // namespace

std::vector<Site> enumerate_sites(const ModuleDecl& m, const MutationOperator& op) {
  check_variant(variants_of(op.category), op.variant, "mutation");
  ModuleDecl working = m;
  auto plans = internal::mutation_plans(working, category_name(op.category), op.variant);
  return sites_from(plans);
}

std::vector<Site> enumerate_sites(const ModuleDecl& m, const EquivalenceTransform& t) {
  check_variant(variants_of(t.category), t.variant, "equivalence");
  ModuleDecl working = m;
  auto plans = internal::equivalence_plans(working, category_name(t.category), t.variant);
  return sites_from(plans);
}

ApplyResult apply_mutation(const ModuleDecl& m, const MutationOperator& op, const Site& site,
                           uint64_t seed) {
  check_variant(variants_of(op.category), op.variant, "mutation");
  ModuleDecl working = m;
  auto plans = internal::mutation_plans(working, category_name(op.category), op.variant);
  auto rec = apply_plan(working, plans, site, seed, false, category_name(op.category), op.variant);
  return ApplyResult{std::move(working), std::move(rec)};
}

ApplyResult apply_equivalence_at(const ModuleDecl& m, const EquivalenceTransform& t,
                                 const Site& site, uint64_t seed) {
  check_variant(variants_of(t.category), t.variant, "equivalence");
  ModuleDecl working = m;
  auto plans = internal::equivalence_plans(working, category_name(t.category), t.variant);
  auto rec = apply_plan(working, plans, site, seed, true, category_name(t.category), t.variant);
  return ApplyResult{std::move(working), std::move(rec)};
}

ApplyResult apply_equivalence(const ModuleDecl& m, const EquivalenceTransform& t, uint64_t seed) {
  check_variant(variants_of(t.category), t.variant, "equivalence");
  ModuleDecl working = m;
  auto plans = internal::equivalence_plans(working, category_name(t.category), t.variant);
  if (plans.empty())
    throw InapplicableError("transform " + category_name(t.category) + "/" + t.variant +
                            " is not applicable to module '" + m.name + "'");
  Rng rng(Rng::mix(seed, 0x5eed));
  uint32_t ordinal = static_cast<uint32_t>(rng.next_below(plans.size()));
  Site site{ordinal, plans[ordinal].path};
  auto rec = apply_plan(working, plans, site, seed, true, category_name(t.category), t.variant);
  return ApplyResult{std::move(working), std::move(rec)};
}

}  // namespace rtlmut::mutate
