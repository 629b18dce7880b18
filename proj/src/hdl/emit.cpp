#include "rtlmut/hdl/emit.hpp"

#include <sstream>

#include "rtlmut/util/rng.hpp"

namespace rtlmut::hdl {

namespace {

// Printing precedence, loosest to tightest. Used to insert the minimal
// parentheses that keep parse(emit(m)) structurally equal to m.
int prec_of(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Ternary: return 1;
    case ExprKind::Binary:
      switch (e.bop) {
        case BinaryOp::LogicOr: return 2;
        case BinaryOp::LogicAnd: return 3;
        case BinaryOp::Or: return 4;
        case BinaryOp::Xor: return 5;
        case BinaryOp::And: return 6;
        case BinaryOp::Eq: case BinaryOp::Ne: return 7;
        case BinaryOp::Lt: case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge: return 8;
        case BinaryOp::Shl: case BinaryOp::Shr: return 9;
        case BinaryOp::Add: case BinaryOp::Sub: return 10;
        case BinaryOp::Mul: return 11;
      }
      return 11;
    case ExprKind::Unary: return 12;
    default: return 13;  // atoms
  }
}

bool is_reduction(UnaryOp op) {
  return op == UnaryOp::RedAnd || op == UnaryOp::RedOr || op == UnaryOp::RedXor;
}

void print_expr(std::string& out, const Expr& e, int parent_prec, bool right_operand) {
  int prec = prec_of(e);
  bool parens = prec < parent_prec || (prec == parent_prec && right_operand);
  if (parens) out += "(";
  switch (e.kind) {
    case ExprKind::Literal:
      out += emit_literal(e.literal);
      break;
    case ExprKind::Ref:
      out += e.name;
      break;
    case ExprKind::BitSelect:
      out += e.name;
      out += "[";
      print_expr(out, e.args[0], 0, false);
      out += "]";
      break;
    case ExprKind::PartSelect:
      out += e.name;
      out += "[" + std::to_string(e.msb) + ":" + std::to_string(e.lsb) + "]";
      break;
    case ExprKind::Concat:
      out += "{";
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        print_expr(out, e.args[i], 0, false);
      }
      out += "}";
      break;
    case ExprKind::Unary:
      if (is_reduction(e.uop)) {
        // Reductions are always wrapped so `a & (&b)` cannot re-lex as `&&`.
        out += "(";
        out += unary_op_text(e.uop);
        print_expr(out, e.args[0], 12, false);
        out += ")";
      } else {
        out += unary_op_text(e.uop);
        print_expr(out, e.args[0], 12, false);
      }
      break;
    case ExprKind::Binary:
      print_expr(out, e.args[0], prec, false);
      out += " ";
      out += binary_op_text(e.bop);
      out += " ";
      print_expr(out, e.args[1], prec, true);
      break;
    case ExprKind::Ternary:
      print_expr(out, e.args[0], 2, false);
      out += " ? ";
      print_expr(out, e.args[1], 0, false);
      out += " : ";
      print_expr(out, e.args[2], 1, false);
      break;
  }
  if (parens) out += ")";
}

std::string indent_str(int n) { return std::string(static_cast<size_t>(n) * 2, ' '); }

void print_body(std::string& out, const std::vector<Stmt>& body, int indent);

void print_stmt(std::string& out, const Stmt& s, int indent) {
  std::string pad = indent_str(indent);
  switch (s.kind) {
    case StmtKind::Assign:
      out += pad + s.lhs + (s.assign_kind == AssignKind::Blocking ? " = " : " <= ");
      print_expr(out, s.rhs, 0, false);
      out += ";\n";
      break;
    case StmtKind::If:
      out += pad + "if (";
      print_expr(out, s.cond, 0, false);
      out += ") begin\n";
      print_body(out, s.then_body, indent + 1);
      if (s.has_else) {
        out += pad + "end else begin\n";
        print_body(out, s.else_body, indent + 1);
      }
      out += pad + "end\n";
      break;
    case StmtKind::Case:
      out += pad + "case (";
      print_expr(out, s.subject, 0, false);
      out += ")\n";
      for (const auto& arm : s.arms) {
        out += indent_str(indent + 1);
        for (size_t i = 0; i < arm.labels.size(); ++i) {
          if (i) out += ", ";
          print_expr(out, arm.labels[i], 0, false);
        }
        out += ": begin\n";
        print_body(out, arm.body, indent + 2);
        out += indent_str(indent + 1) + "end\n";
      }
      if (s.has_default) {
        out += indent_str(indent + 1) + "default: begin\n";
        print_body(out, s.default_body, indent + 2);
        out += indent_str(indent + 1) + "end\n";
      }
      out += pad + "endcase\n";
      break;
  }
}

void print_body(std::string& out, const std::vector<Stmt>& body, int indent) {
  for (const auto& s : body) print_stmt(out, s, indent);
}

std::string range_text(int32_t msb, int32_t lsb) {
  if (msb == 0 && lsb == 0) return "";
  return "[" + std::to_string(msb) + ":" + std::to_string(lsb) + "] ";
}

}  // namespace

std::string emit_literal(const BitVec& v) {
  if (v.width == 1) return v.bits ? "1'b1" : "1'b0";
  std::ostringstream os;
  os << v.width << "'h" << std::hex << v.bits;
  return os.str();
}

std::string emit_expr(const Expr& e) {
  std::string out;
  print_expr(out, e, 0, false);
  return out;
}

std::string emit_stmt(const Stmt& s, int indent) {
  std::string out;
  print_stmt(out, s, indent);
  return out;
}

SourceUnit emit(const ModuleDecl& m) {
  std::string out = "module " + m.name + "(\n";
  for (size_t i = 0; i < m.ports.size(); ++i) {
    const auto& p = m.ports[i];
    out += "  ";
    out += p.dir == Direction::Input ? "input " : "output ";
    if (p.is_reg) out += "reg ";
    out += range_text(p.msb, p.lsb);
    out += p.name;
    out += i + 1 < m.ports.size() ? ",\n" : "\n";
  }
  out += ");\n";
  for (const auto& p : m.params)
    out += "  parameter " + p.name + " = " + emit_literal(p.value) + ";\n";
  for (const auto& n : m.nets) {
    out += n.is_reg ? "  reg " : "  wire ";
    out += range_text(n.msb, n.lsb);
    out += n.name + ";\n";
  }
  for (const auto& a : m.assigns) {
    out += "  assign " + a.lhs + " = ";
    print_expr(out, a.rhs, 0, false);
    out += ";\n";
  }
  for (const auto& b : m.blocks) {
    out += "\n  always @(";
    if (b.sens.star) {
      out += "*";
    } else {
      for (size_t i = 0; i < b.sens.entries.size(); ++i) {
        const auto& e = b.sens.entries[i];
        if (i) out += " or ";
        if (e.edge == EdgeKind::Posedge) out += "posedge ";
        if (e.edge == EdgeKind::Negedge) out += "negedge ";
        out += e.signal;
      }
    }
    out += ") begin\n";
    print_body(out, b.body, 2);
    out += "  end\n";
  }
  out += "endmodule\n";
  return SourceUnit{std::move(out), m.name + ".emitted"};
}

std::string ast_fingerprint(const ModuleDecl& m) {
  // The emitted text is already a canonical structural encoding.
  const std::string text = emit(m).text;
  uint64_t h = fnv1a64(text.data(), text.size());
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace rtlmut::hdl
