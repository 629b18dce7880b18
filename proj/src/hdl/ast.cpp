#include "rtlmut/hdl/ast.hpp"

namespace rtlmut::hdl {

const char* unary_op_text(UnaryOp op) {
  switch (op) {
    case UnaryOp::Not: return "~";
    case UnaryOp::LogicNot: return "!";
    case UnaryOp::Neg: return "-";
    case UnaryOp::RedAnd: return "&";
    case UnaryOp::RedOr: return "|";
    case UnaryOp::RedXor: return "^";
  }
  return "?";
}

const char* binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "|";
    case BinaryOp::Xor: return "^";
    case BinaryOp::LogicAnd: return "&&";
    case BinaryOp::LogicOr: return "||";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
  }
  return "?";
}

uint32_t ModuleDecl::width_of(const std::string& n) const {
  if (const auto* p = find_port(n)) return p->width();
  if (const auto* w = find_net(n)) return w->width();
  if (const auto* p = find_param(n)) return p->value.width;
  return 0;
}

}  // namespace rtlmut::hdl
