#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtlmut/hdl/diag.hpp"

namespace rtlmut::hdl {

// Two-state bit vector, width 1..64. Value is always masked to width.
struct BitVec {
  uint32_t width = 1;
  uint64_t bits = 0;

  BitVec() = default;
  BitVec(uint32_t w, uint64_t b) : width(w), bits(b & mask(w)) {}

  static uint64_t mask(uint32_t w) { return w >= 64 ? ~0ULL : (1ULL << w) - 1; }

  // Zero-extend or truncate to a new width.
  BitVec resized(uint32_t w) const { return BitVec(w, bits); }
  bool lsb() const { return bits & 1; }

  friend bool operator==(const BitVec&, const BitVec&) = default;
};

enum class ExprKind { Literal, Ref, BitSelect, PartSelect, Concat, Unary, Binary, Ternary };

enum class UnaryOp { Not, LogicNot, Neg, RedAnd, RedOr, RedXor };

enum class BinaryOp {
  And, Or, Xor, LogicAnd, LogicOr,
  Add, Sub, Mul, Shl, Shr,
  Eq, Ne, Lt, Le, Gt, Ge
};

const char* unary_op_text(UnaryOp op);
const char* binary_op_text(BinaryOp op);

// Single-struct expression node; `kind` selects which fields are meaningful.
// Value semantics throughout: copying a ModuleDecl deep-copies its whole AST,
// which is what the mutation rewriters rely on.
struct Expr {
  ExprKind kind = ExprKind::Literal;

  BitVec literal;          // Literal
  std::string name;        // Ref, BitSelect, PartSelect (base signal)
  int32_t msb = 0;         // PartSelect bounds (constant)
  int32_t lsb = 0;
  UnaryOp uop = UnaryOp::Not;
  BinaryOp bop = BinaryOp::And;
  std::vector<Expr> args;  // Unary:1  Binary:2  Ternary:3(cond,then,else)  Concat:n  BitSelect:1(index)

  // Filled in by elaboration; 0 means "not yet elaborated".
  uint32_t width = 0;

  friend bool operator==(const Expr&, const Expr&) = default;

  static Expr lit(BitVec v) {
    Expr e;
    e.kind = ExprKind::Literal;
    e.literal = v;
    return e;
  }
  static Expr ref(std::string n) {
    Expr e;
    e.kind = ExprKind::Ref;
    e.name = std::move(n);
    return e;
  }
  static Expr unary(UnaryOp op, Expr a) {
    Expr e;
    e.kind = ExprKind::Unary;
    e.uop = op;
    e.args.push_back(std::move(a));
    return e;
  }
  static Expr binary(BinaryOp op, Expr a, Expr b) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.bop = op;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
  }
};

enum class StmtKind { Assign, If, Case };
enum class AssignKind { Blocking, NonBlocking };

struct Stmt;

struct CaseArm {
  std::vector<Expr> labels;  // Literal or Ref-to-parameter, one or more per arm
  std::vector<Stmt> body;

  friend bool operator==(const CaseArm&, const CaseArm&);
};

// Statements are canonicalized at parse time: begin/end groups become the
// surrounding statement list, so every body is a std::vector<Stmt> and the
// emitter can always print begin/end without changing structure.
struct Stmt {
  StmtKind kind = StmtKind::Assign;

  // Assign
  std::string lhs;
  Expr rhs;
  AssignKind assign_kind = AssignKind::Blocking;

  // If
  Expr cond;
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
  bool has_else = false;

  // Case
  Expr subject;
  std::vector<CaseArm> arms;
  std::vector<Stmt> default_body;
  bool has_default = false;

  friend bool operator==(const Stmt&, const Stmt&);
};

inline bool operator==(const CaseArm& a, const CaseArm& b) {
  return a.labels == b.labels && a.body == b.body;
}
inline bool operator==(const Stmt& a, const Stmt& b) {
  return a.kind == b.kind && a.lhs == b.lhs && a.rhs == b.rhs && a.assign_kind == b.assign_kind &&
         a.cond == b.cond && a.then_body == b.then_body && a.else_body == b.else_body &&
         a.has_else == b.has_else && a.subject == b.subject && a.arms == b.arms &&
         a.default_body == b.default_body && a.has_default == b.has_default;
}

enum class Direction { Input, Output };

struct PortDecl {
  std::string name;
  Direction dir = Direction::Input;
  bool is_reg = false;  // output reg
  int32_t msb = 0;
  int32_t lsb = 0;

  uint32_t width() const { return static_cast<uint32_t>(msb - lsb + 1); }
  friend bool operator==(const PortDecl&, const PortDecl&) = default;
};

struct NetDecl {
  std::string name;
  bool is_reg = false;  // wire vs reg
  int32_t msb = 0;
  int32_t lsb = 0;

  uint32_t width() const { return static_cast<uint32_t>(msb - lsb + 1); }
  friend bool operator==(const NetDecl&, const NetDecl&) = default;
};

struct ParamDecl {
  std::string name;
  BitVec value;
  friend bool operator==(const ParamDecl&, const ParamDecl&) = default;
};

struct ContinuousAssign {
  std::string lhs;
  Expr rhs;
  friend bool operator==(const ContinuousAssign&, const ContinuousAssign&) = default;
};

enum class EdgeKind { Level, Posedge, Negedge };

struct SensEntry {
  EdgeKind edge = EdgeKind::Level;
  std::string signal;
  friend bool operator==(const SensEntry&, const SensEntry&) = default;
};

struct SensitivityList {
  bool star = true;                 // @(*) / @*
  std::vector<SensEntry> entries;  // empty iff star

  bool has_edge() const {
    for (const auto& e : entries)
      if (e.edge != EdgeKind::Level) return true;
    return false;
  }
  friend bool operator==(const SensitivityList&, const SensitivityList&) = default;
};

struct AlwaysBlock {
  SensitivityList sens;
  std::vector<Stmt> body;

  // Sequential iff the sensitivity list contains at least one edge trigger.
  bool is_sequential() const { return sens.has_edge(); }
  friend bool operator==(const AlwaysBlock&, const AlwaysBlock&) = default;
};

// Elaborated module: identifiers resolved, widths inferred, driver rules
// checked. Immutable by convention after elaboration; share freely.
struct ModuleDecl {
  std::string name;
  std::vector<PortDecl> ports;
  std::vector<ParamDecl> params;
  std::vector<NetDecl> nets;
  std::vector<ContinuousAssign> assigns;
  std::vector<AlwaysBlock> blocks;

  const PortDecl* find_port(const std::string& n) const {
    for (const auto& p : ports)
      if (p.name == n) return &p;
    return nullptr;
  }
  const NetDecl* find_net(const std::string& n) const {
    for (const auto& p : nets)
      if (p.name == n) return &p;
    return nullptr;
  }
  const ParamDecl* find_param(const std::string& n) const {
    for (const auto& p : params)
      if (p.name == n) return &p;
    return nullptr;
  }

  // Declared width of a port, net or parameter; 0 if unknown identifier.
  uint32_t width_of(const std::string& n) const;

  friend bool operator==(const ModuleDecl&, const ModuleDecl&) = default;
};

// HDL source text plus provenance (file path or a generated id).
struct SourceUnit {
  std::string text;
  std::string origin;
};

}  // namespace rtlmut::hdl
