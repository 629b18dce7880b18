#pragma once

#include <optional>
#include <set>
#include <string>

#include "rtlmut/hdl/ast.hpp"

namespace rtlmut::hdl {

// Port-naming conventions shared by the stimulus generator, the mutation
// operators and the testbench template builder.
inline std::optional<std::string> find_clock_port(const std::vector<PortDecl>& ports) {
  for (const auto& p : ports) {
    if (p.dir != Direction::Input || p.width() != 1) continue;
    if (p.name == "clk" || p.name == "clock") return p.name;
  }
  for (const auto& p : ports) {
    if (p.dir != Direction::Input || p.width() != 1) continue;
    if (p.name.starts_with("clk") || p.name.starts_with("clock")) return p.name;
  }
  return std::nullopt;
}

struct ResetPort {
  std::string name;
  bool active_low = false;
};

inline std::optional<ResetPort> find_reset_port(const std::vector<PortDecl>& ports) {
  auto looks_reset = [](const std::string& n) {
    return n.starts_with("rst") || n.starts_with("reset") || n == "arst" || n == "nrst";
  };
  for (const auto& p : ports) {
    if (p.dir != Direction::Input || p.width() != 1) continue;
    if (!looks_reset(p.name)) continue;
    bool active_low = p.name.ends_with("_n") || p.name.ends_with("_b") || p.name == "nrst";
    return ResetPort{p.name, active_low};
  }
  return std::nullopt;
}

// Collects every signal name an expression reads (selects include their base
// signal and any dynamic index reads).
inline void collect_reads(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case ExprKind::Literal:
      return;
    case ExprKind::Ref:
    case ExprKind::PartSelect:
      out.insert(e.name);
      return;
    case ExprKind::BitSelect:
      out.insert(e.name);
      collect_reads(e.args[0], out);
      return;
    default:
      for (const auto& a : e.args) collect_reads(a, out);
  }
}

inline void collect_reads(const std::vector<Stmt>& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    switch (s.kind) {
      case StmtKind::Assign:
        collect_reads(s.rhs, out);
        break;
      case StmtKind::If:
        collect_reads(s.cond, out);
        collect_reads(s.then_body, out);
        collect_reads(s.else_body, out);
        break;
      case StmtKind::Case:
        collect_reads(s.subject, out);
        for (const auto& arm : s.arms) {
          for (const auto& l : arm.labels) collect_reads(l, out);
          collect_reads(arm.body, out);
        }
        collect_reads(s.default_body, out);
        break;
    }
  }
}

inline void collect_writes(const std::vector<Stmt>& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    switch (s.kind) {
      case StmtKind::Assign:
        out.insert(s.lhs);
        break;
      case StmtKind::If:
        collect_writes(s.then_body, out);
        collect_writes(s.else_body, out);
        break;
      case StmtKind::Case:
        for (const auto& arm : s.arms) collect_writes(arm.body, out);
        collect_writes(s.default_body, out);
        break;
    }
  }
}

}  // namespace rtlmut::hdl
