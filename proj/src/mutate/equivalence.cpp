#include <algorithm>
#include <map>
#include <set>

#include "rtlmut/hdl/emit.hpp"
#include "rtlmut/hdl/walk.hpp"
#include "rtlmut/mutate/mutate.hpp"
#include "rewrite_internal.hpp"

namespace rtlmut::mutate::internal {

using hdl::BinaryOp;
using hdl::BitVec;
using hdl::Expr;
using hdl::ExprKind;
using hdl::ModuleDecl;
using hdl::Stmt;
using hdl::StmtKind;
using hdl::UnaryOp;

namespace {

void rename_everywhere_expr(Expr& e, const std::map<std::string, std::string>& map) {
  if (e.kind == ExprKind::Ref || e.kind == ExprKind::BitSelect || e.kind == ExprKind::PartSelect) {
    auto it = map.find(e.name);
    if (it != map.end()) e.name = it->second;
  }
  for (auto& a : e.args) rename_everywhere_expr(a, map);
}

void rename_everywhere_body(std::vector<Stmt>& body, const std::map<std::string, std::string>& map) {
  for (auto& s : body) {
    switch (s.kind) {
      case StmtKind::Assign: {
        auto it = map.find(s.lhs);
        if (it != map.end()) s.lhs = it->second;
        rename_everywhere_expr(s.rhs, map);
        break;
      }
      case StmtKind::If:
        rename_everywhere_expr(s.cond, map);
        rename_everywhere_body(s.then_body, map);
        rename_everywhere_body(s.else_body, map);
        break;
      case StmtKind::Case:
        rename_everywhere_expr(s.subject, map);
        for (auto& arm : s.arms) {
          for (auto& l : arm.labels) rename_everywhere_expr(l, map);
          rename_everywhere_body(arm.body, map);
        }
        rename_everywhere_body(s.default_body, map);
        break;
    }
  }
}

void rename_everywhere(ModuleDecl& m, const std::map<std::string, std::string>& map) {
  for (auto& n : m.nets)
    if (auto it = map.find(n.name); it != map.end()) n.name = it->second;
  for (auto& p : m.params)
    if (auto it = map.find(p.name); it != map.end()) p.name = it->second;
  for (auto& a : m.assigns) {
    if (auto it = map.find(a.lhs); it != map.end()) a.lhs = it->second;
    rename_everywhere_expr(a.rhs, map);
  }
  for (auto& b : m.blocks) {
    for (auto& e : b.sens.entries)
      if (auto it = map.find(e.signal); it != map.end()) e.signal = it->second;
    rename_everywhere_body(b.body, map);
  }
}

// ---- stylistic -------------------------------------------------------------

void plans_rename_nets(ModuleDecl& m, std::vector<Plan>& plans) {
  if (m.nets.empty() && m.params.empty()) return;
  ModuleDecl* mp = &m;
  auto snip = [mp] {
    std::string s = "locals{";
    bool first = true;
    for (const auto& n : mp->nets) {
      if (!first) s += ",";
      s += n.name;
      first = false;
    }
    for (const auto& p : mp->params) {
      if (!first) s += ",";
      s += p.name;
      first = false;
    }
    return s + "}";
  };
  plans.push_back({"module.locals", snip, [mp](Rng& rng) {
                     for (int k = static_cast<int>(1 + rng.next_below(9));; ++k) {
                       std::string suffix = "_r" + std::to_string(k);
                       std::map<std::string, std::string> map;
                       std::set<std::string> taken;
                       for (const auto& p : mp->ports) taken.insert(p.name);
                       for (const auto& n : mp->nets) taken.insert(n.name);
                       for (const auto& p : mp->params) taken.insert(p.name);
                       bool ok = true;
                       for (const auto& n : mp->nets) {
                         if (taken.count(n.name + suffix)) ok = false;
                         map[n.name] = n.name + suffix;
                       }
                       for (const auto& p : mp->params) {
                         if (taken.count(p.name + suffix)) ok = false;
                         map[p.name] = p.name + suffix;
                       }
                       if (!ok) continue;
                       rename_everywhere(*mp, map);
                       return;
                     }
                   }});
}

void plans_reorder_decls(ModuleDecl& m, std::vector<Plan>& plans) {
  if (m.nets.size() < 2) return;
  ModuleDecl* mp = &m;
  auto snip = [mp] {
    std::string s = "nets{";
    for (size_t i = 0; i < mp->nets.size(); ++i) s += (i ? "," : "") + mp->nets[i].name;
    return s + "}";
  };
  plans.push_back({"module.nets", snip, [mp](Rng& rng) {
                     size_t n = mp->nets.size();
                     size_t r = 1 + static_cast<size_t>(rng.next_below(n - 1));
                     std::rotate(mp->nets.begin(), mp->nets.begin() + static_cast<ptrdiff_t>(r),
                                 mp->nets.end());
                   }});
}

// ---- architectural ---------------------------------------------------------

void set_reg_flag(ModuleDecl& m, const std::string& name, bool is_reg) {
  for (auto& p : m.ports)
    if (p.name == name) p.is_reg = is_reg;
  for (auto& n : m.nets)
    if (n.name == name) n.is_reg = is_reg;
}

void plans_assign_to_always(ModuleDecl& m, std::vector<Plan>& plans) {
  ModuleDecl* mp = &m;
  for (size_t i = 0; i < m.assigns.size(); ++i) {
    std::string lhs = m.assigns[i].lhs;
    auto snip = [mp, lhs] {
      for (const auto& a : mp->assigns)
        if (a.lhs == lhs) return "assign " + lhs + " = " + hdl::emit_expr(a.rhs);
      return "always @(*) " + lhs + " = ...";
    };
    plans.push_back({"assign[" + std::to_string(i) + "]", snip, [mp, i](Rng&) {
                       hdl::ContinuousAssign moved = std::move(mp->assigns[i]);
                       mp->assigns.erase(mp->assigns.begin() + static_cast<ptrdiff_t>(i));
                       Stmt st;
                       st.kind = StmtKind::Assign;
                       st.lhs = moved.lhs;
                       st.rhs = std::move(moved.rhs);
                       st.assign_kind = hdl::AssignKind::Blocking;
                       hdl::AlwaysBlock blk;
                       blk.sens.star = true;
                       blk.body.push_back(std::move(st));
                       mp->blocks.push_back(std::move(blk));
                       set_reg_flag(*mp, moved.lhs, true);
                     }});
  }
}

void plans_always_to_assign(ModuleDecl& m, std::vector<Plan>& plans) {
  ModuleDecl* mp = &m;
  for (size_t b = 0; b < m.blocks.size(); ++b) {
    const auto& blk = m.blocks[b];
    if (blk.is_sequential() || !blk.sens.star) continue;
    if (blk.body.size() != 1 || blk.body[0].kind != StmtKind::Assign) continue;
    if (blk.body[0].assign_kind != hdl::AssignKind::Blocking) continue;
    std::set<std::string> reads;
    hdl::collect_reads(blk.body[0].rhs, reads);
    if (reads.count(blk.body[0].lhs)) continue;  // would become a comb loop
    std::string lhs = blk.body[0].lhs;
    auto snip = [mp, lhs] {
      for (const auto& a : mp->assigns)
        if (a.lhs == lhs) return "assign " + lhs + " = " + hdl::emit_expr(a.rhs);
      return "always @(*) " + lhs + " = ...";
    };
    plans.push_back({"block[" + std::to_string(b) + "]", snip, [mp, b](Rng&) {
                       Stmt st = std::move(mp->blocks[b].body[0]);
                       mp->blocks.erase(mp->blocks.begin() + static_cast<ptrdiff_t>(b));
                       mp->assigns.push_back({st.lhs, std::move(st.rhs)});
                       set_reg_flag(*mp, st.lhs, false);
                     }});
  }
}

// ---- implementation --------------------------------------------------------

std::function<std::string()> stmt_snip(Stmt* node) {
  return [node] {
    std::string s = hdl::emit_stmt(*node);
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
  };
}

void plans_if_to_case(ModuleDecl& m, std::vector<Plan>& plans) {
  walk_stmts(m, [&](const StmtCtx& c) {
    if (c.node->kind != StmtKind::If) return;
    Stmt* node = c.node;
    plans.push_back({c.path, stmt_snip(node), [node](Rng&) {
                       uint32_t w = std::max(1u, node->cond.width);
                       Stmt cs;
                       cs.kind = StmtKind::Case;
                       cs.subject = std::move(node->cond);
                       hdl::CaseArm zero_arm;
                       zero_arm.labels.push_back(Expr::lit(BitVec(w, 0)));
                       zero_arm.body = std::move(node->else_body);
                       cs.arms.push_back(std::move(zero_arm));
                       cs.has_default = true;
                       cs.default_body = std::move(node->then_body);
                       *node = std::move(cs);
                     }});
  });
}

void plans_case_to_if(ModuleDecl& m, std::vector<Plan>& plans) {
  walk_stmts(m, [&](const StmtCtx& c) {
    if (c.node->kind != StmtKind::Case || c.node->arms.empty()) return;
    Stmt* node = c.node;
    plans.push_back({c.path, stmt_snip(node), [node](Rng&) {
                       Stmt chain;
                       bool have_chain = false;
                       // Build the chain back to front so each arm wraps the rest.
                       if (node->has_default) {
                         // Tail carries the default body directly.
                       }
                       std::vector<Stmt> tail = std::move(node->default_body);
                       bool tail_used = node->has_default;
                       for (size_t a = node->arms.size(); a-- > 0;) {
                         auto& arm = node->arms[a];
                         Expr cond;
                         bool first = true;
                         for (auto& l : arm.labels) {
                           Expr eq = Expr::binary(BinaryOp::Eq, node->subject, l);
                           if (first) {
                             cond = std::move(eq);
                             first = false;
                           } else {
                             cond = Expr::binary(BinaryOp::LogicOr, std::move(cond), std::move(eq));
                           }
                         }
                         Stmt iff;
                         iff.kind = StmtKind::If;
                         iff.cond = std::move(cond);
                         iff.then_body = std::move(arm.body);
                         if (have_chain) {
                           iff.has_else = true;
                           iff.else_body.push_back(std::move(chain));
                         } else if (tail_used && !tail.empty()) {
                           iff.has_else = true;
                           iff.else_body = std::move(tail);
                         }
                         chain = std::move(iff);
                         have_chain = true;
                       }
                       *node = std::move(chain);
                     }});
  });
}

// ---- optimization ----------------------------------------------------------

void plans_demorgan(ModuleDecl& m, std::vector<Plan>& plans) {
  walk_exprs(m, [&](const ExprCtx& c) {
    Expr* node = c.node;
    if (node->kind != ExprKind::Unary || node->uop != UnaryOp::Not) return;
    const Expr& inner = node->args[0];
    if (inner.kind != ExprKind::Binary) return;
    if (inner.bop != BinaryOp::And && inner.bop != BinaryOp::Or) return;
    // De Morgan is only width-safe when both operands agree.
    if (inner.args[0].width != inner.args[1].width) return;
    plans.push_back({c.path, [node] { return hdl::emit_expr(*node); }, [node](Rng&) {
                       Expr lhs = Expr::unary(UnaryOp::Not, std::move(node->args[0].args[0]));
                       Expr rhs = Expr::unary(UnaryOp::Not, std::move(node->args[0].args[1]));
                       BinaryOp op =
                           node->args[0].bop == BinaryOp::And ? BinaryOp::Or : BinaryOp::And;
                       *node = Expr::binary(op, std::move(lhs), std::move(rhs));
                     }});
  });
}

void plans_mul2_shift(ModuleDecl& m, std::vector<Plan>& plans) {
  walk_exprs(m, [&](const ExprCtx& c) {
    if (!c.is_rhs_root) return;
    Expr* node = c.node;
    if (node->kind != ExprKind::Binary || node->bop != BinaryOp::Mul) return;
    for (int lit_side = 0; lit_side < 2; ++lit_side) {
      const Expr& lit = node->args[static_cast<size_t>(lit_side)];
      const Expr& other = node->args[static_cast<size_t>(1 - lit_side)];
      if (lit.kind != ExprKind::Literal) continue;
      uint64_t v = lit.literal.bits;
      if (v == 0 || (v & (v - 1)) != 0) continue;  // power of two only
      if (c.lhs_width > other.width) continue;     // truncation must absorb the widening
      uint32_t shift = 0;
      while ((1ULL << shift) != v) ++shift;
      int side = lit_side;
      plans.push_back({c.path, [node] { return hdl::emit_expr(*node); }, [node, side, shift](Rng&) {
                         Expr other_copy = std::move(node->args[static_cast<size_t>(1 - side)]);
                         *node = Expr::binary(BinaryOp::Shl, std::move(other_copy),
                                              Expr::lit(BitVec(32, shift)));
                       }});
      return;
    }
  });
}

void plans_double_not(ModuleDecl& m, std::vector<Plan>& plans) {
  walk_exprs(m, [&](const ExprCtx& c) {
    if (!c.is_rhs_root) return;
    Expr* node = c.node;
    plans.push_back({c.path, [node] { return hdl::emit_expr(*node); }, [node](Rng&) {
                       Expr inner = std::move(*node);
                       *node = Expr::unary(UnaryOp::Not,
                                           Expr::unary(UnaryOp::Not, std::move(inner)));
                     }});
  });
}

// ---- structural ------------------------------------------------------------

void plans_factor_rhs(ModuleDecl& m, std::vector<Plan>& plans) {
  ModuleDecl* mp = &m;
  for (size_t i = 0; i < m.assigns.size(); ++i) {
    if (m.assigns[i].rhs.kind == ExprKind::Ref) continue;
    std::string lhs = m.assigns[i].lhs;
    auto snip = [mp, lhs] {
      for (const auto& a : mp->assigns)
        if (a.lhs == lhs) return "assign " + lhs + " = " + hdl::emit_expr(a.rhs);
      return std::string("assign " + lhs);
    };
    plans.push_back({"assign[" + std::to_string(i) + "]", snip, [mp, i](Rng&) {
                       uint32_t w = std::max(1u, mp->assigns[i].rhs.width);
                       std::string t = fresh_net_name(*mp, "t");
                       hdl::NetDecl d;
                       d.name = t;
                       d.is_reg = false;
                       d.msb = static_cast<int32_t>(w) - 1;
                       d.lsb = 0;
                       mp->nets.push_back(d);
                       Expr old_rhs = std::move(mp->assigns[i].rhs);
                       mp->assigns[i].rhs = Expr::ref(t);
                       mp->assigns.push_back({t, std::move(old_rhs)});
                     }});
  }
}

void plans_reorder_items(ModuleDecl& m, std::vector<Plan>& plans) {
  ModuleDecl* mp = &m;
  if (m.assigns.size() >= 2) {
    plans.push_back({"module.assigns",
                     [mp] { return "assigns x" + std::to_string(mp->assigns.size()); },
                     [mp](Rng& rng) {
                       size_t n = mp->assigns.size();
                       size_t r = 1 + static_cast<size_t>(rng.next_below(n - 1));
                       std::rotate(mp->assigns.begin(),
                                   mp->assigns.begin() + static_cast<ptrdiff_t>(r),
                                   mp->assigns.end());
                     }});
  } else if (m.blocks.size() >= 2) {
    plans.push_back({"module.blocks",
                     [mp] { return "blocks x" + std::to_string(mp->blocks.size()); },
                     [mp](Rng& rng) {
                       size_t n = mp->blocks.size();
                       size_t r = 1 + static_cast<size_t>(rng.next_below(n - 1));
                       std::rotate(mp->blocks.begin(),
                                   mp->blocks.begin() + static_cast<ptrdiff_t>(r),
                                   mp->blocks.end());
                     }});
  }
}

}  // namespace

std::vector<Plan> equivalence_plans(ModuleDecl& m, const std::string& category,
                                    const std::string& variant) {
  std::vector<Plan> plans;
  switch (equivalence_category_from(category)) {
    case EquivalenceCategory::Stylistic:
      if (variant == "rename_nets") plans_rename_nets(m, plans);
      else if (variant == "reorder_decls") plans_reorder_decls(m, plans);
      break;
    case EquivalenceCategory::Architectural:
      if (variant == "assign_to_always") plans_assign_to_always(m, plans);
      else if (variant == "always_to_assign") plans_always_to_assign(m, plans);
      break;
    case EquivalenceCategory::Implementation:
      if (variant == "if_to_case") plans_if_to_case(m, plans);
      else if (variant == "case_to_if") plans_case_to_if(m, plans);
      break;
    case EquivalenceCategory::Optimization:
      if (variant == "demorgan") plans_demorgan(m, plans);
      else if (variant == "mul2_shift") plans_mul2_shift(m, plans);
      else if (variant == "double_not") plans_double_not(m, plans);
      break;
    case EquivalenceCategory::Structural:
      if (variant == "factor_rhs") plans_factor_rhs(m, plans);
      else if (variant == "reorder_items") plans_reorder_items(m, plans);
      break;
  }
  return plans;
}

}  // namespace rtlmut::mutate::internal
