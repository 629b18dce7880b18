#include "support/oracle.hpp"

#include <set>
#include <stdexcept>
#include <vector>

#include "rtlmut/hdl/walk.hpp"

namespace testsupport {

using namespace rtlmut::hdl;

namespace {

uint64_t wmask(uint32_t w) { return w >= 64 ? ~0ULL : (1ULL << w) - 1; }

struct Env {
  const ModuleDecl& m;
  std::map<std::string, uint64_t>& values;

  std::pair<int32_t, int32_t> range(const std::string& n) const {
    if (const auto* p = m.find_port(n)) return {p->msb, p->lsb};
    if (const auto* d = m.find_net(n)) return {d->msb, d->lsb};
    return {0, 0};
  }

  uint64_t eval(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::Literal:
        return e.literal.bits;
      case ExprKind::Ref: {
        if (const auto* p = m.find_param(e.name)) return p->value.bits;
        auto it = values.find(e.name);
        return it == values.end() ? 0 : it->second;
      }
      case ExprKind::BitSelect: {
        auto [msb, lsb] = range(e.name);
        auto idx = static_cast<int64_t>(eval(e.args[0]));
        if (idx < lsb || idx > msb) return 0;
        return (eval(Expr::ref(e.name)) >> (idx - lsb)) & 1;
      }
      case ExprKind::PartSelect: {
        auto [msb, lsb] = range(e.name);
        (void)msb;
        return (eval(Expr::ref(e.name)) >> (e.lsb - lsb)) & wmask(e.width);
      }
      case ExprKind::Concat: {
        uint64_t v = 0;
        for (const auto& a : e.args) v = (v << a.width) | eval(a);
        return v;
      }
      case ExprKind::Unary: {
        uint64_t a = eval(e.args[0]);
        switch (e.uop) {
          case UnaryOp::Not: return ~a & wmask(e.width);
          case UnaryOp::Neg: return (~a + 1) & wmask(e.width);
          case UnaryOp::LogicNot: return a == 0 ? 1 : 0;
          case UnaryOp::RedAnd: return a == wmask(e.args[0].width) ? 1 : 0;
          case UnaryOp::RedOr: return a != 0 ? 1 : 0;
          case UnaryOp::RedXor: {
            uint64_t p = 0;
            for (uint64_t x = a; x; x &= x - 1) p ^= 1;
            return p;
          }
        }
        return 0;
      }
      case ExprKind::Binary: {
        uint64_t a = eval(e.args[0]);
        uint64_t b = eval(e.args[1]);
        switch (e.bop) {
          case BinaryOp::And: return a & b;
          case BinaryOp::Or: return a | b;
          case BinaryOp::Xor: return a ^ b;
          case BinaryOp::LogicAnd: return (a != 0 && b != 0) ? 1 : 0;
          case BinaryOp::LogicOr: return (a != 0 || b != 0) ? 1 : 0;
          case BinaryOp::Add: return (a + b) & wmask(e.width);
          case BinaryOp::Sub: return (a - b) & wmask(e.width);
          case BinaryOp::Mul: return (a * b) & wmask(e.width);
          case BinaryOp::Shl: return b >= 64 ? 0 : (a << b) & wmask(e.width);
          case BinaryOp::Shr: return b >= 64 ? 0 : a >> b;
          case BinaryOp::Eq: return a == b ? 1 : 0;
          case BinaryOp::Ne: return a != b ? 1 : 0;
          case BinaryOp::Lt: return a < b ? 1 : 0;
          case BinaryOp::Le: return a <= b ? 1 : 0;
          case BinaryOp::Gt: return a > b ? 1 : 0;
          case BinaryOp::Ge: return a >= b ? 1 : 0;
        }
        return 0;
      }
      case ExprKind::Ternary:
        return eval(eval(e.args[0]) != 0 ? e.args[1] : e.args[2]) & wmask(e.width);
    }
    return 0;
  }

  void write(const std::string& lhs, uint64_t v) {
    uint32_t w = m.width_of(lhs);
    values[lhs] = v & wmask(w);
  }

  void exec(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
      switch (s.kind) {
        case StmtKind::Assign:
          write(s.lhs, eval(s.rhs));
          break;
        case StmtKind::If:
          exec(eval(s.cond) != 0 ? s.then_body : s.else_body);
          break;
        case StmtKind::Case: {
          uint64_t subj = eval(s.subject);
          const std::vector<Stmt>* chosen = s.has_default ? &s.default_body : nullptr;
          for (const auto& arm : s.arms) {
            for (const auto& l : arm.labels) {
              if (eval(l) == subj) {
                chosen = &arm.body;
                break;
              }
            }
            if (chosen == &arm.body) break;
          }
          if (chosen) exec(*chosen);
          break;
        }
      }
    }
  }
};

struct Item {
  std::set<std::string> reads, writes;
  const ContinuousAssign* assign = nullptr;
  const AlwaysBlock* block = nullptr;
};

}  // namespace

std::map<std::string, uint64_t> oracle_eval(const ModuleDecl& m,
                                            const std::map<std::string, uint64_t>& inputs) {
  std::vector<Item> items;
  for (const auto& a : m.assigns) {
    Item it;
    it.assign = &a;
    collect_reads(a.rhs, it.reads);
    it.writes.insert(a.lhs);
    items.push_back(std::move(it));
  }
  for (const auto& b : m.blocks) {
    if (b.is_sequential())
      throw std::runtime_error("oracle_eval: sequential block in combinational oracle");
    Item it;
    it.block = &b;
    collect_reads(b.body, it.reads);
    collect_writes(b.body, it.writes);
    items.push_back(std::move(it));
  }

  // Kahn topological order on writer -> reader edges.
  std::map<std::string, size_t> writer_of;
  for (size_t i = 0; i < items.size(); ++i)
    for (const auto& w : items[i].writes) writer_of[w] = i;
  std::vector<std::set<size_t>> deps(items.size());
  for (size_t i = 0; i < items.size(); ++i)
    for (const auto& r : items[i].reads)
      if (auto it = writer_of.find(r); it != writer_of.end() && it->second != i)
        deps[i].insert(it->second);

  std::vector<size_t> order;
  std::vector<bool> placed(items.size(), false);
  for (size_t pass = 0; pass < items.size(); ++pass) {
    for (size_t i = 0; i < items.size(); ++i) {
      if (placed[i]) continue;
      bool ready = true;
      for (size_t d : deps[i])
        if (!placed[d]) ready = false;
      if (ready) {
        placed[i] = true;
        order.push_back(i);
      }
    }
  }
  if (order.size() != items.size())
    throw std::runtime_error("oracle_eval: combinational cycle");

  std::map<std::string, uint64_t> values;
  for (const auto& p : m.ports)
    if (p.dir == Direction::Input) {
      auto it = inputs.find(p.name);
      values[p.name] = (it == inputs.end() ? 0 : it->second) & wmask(p.width());
    }
  Env env{m, values};
  for (size_t i : order) {
    if (items[i].assign) env.write(items[i].assign->lhs, env.eval(items[i].assign->rhs));
    else env.exec(items[i].block->body);
  }

  std::map<std::string, uint64_t> outputs;
  for (const auto& p : m.ports)
    if (p.dir == Direction::Output) outputs[p.name] = values.count(p.name) ? values[p.name] : 0;
  return outputs;
}

}  // namespace testsupport
