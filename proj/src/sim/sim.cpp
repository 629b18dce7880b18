#include "rtlmut/sim/sim.hpp"

#include <algorithm>
#include <cassert>

#include "rtlmut/hdl/walk.hpp"

namespace rtlmut::sim {

using hdl::BinaryOp;
using hdl::BitVec;
using hdl::EdgeKind;
using hdl::ExprKind;
using hdl::StmtKind;
using hdl::UnaryOp;
using detail::CExpr;
using detail::CStmt;
using detail::Proc;

namespace {

uint64_t width_mask(uint32_t w) { return BitVec::mask(w); }

struct Compiler {
  const hdl::ModuleDecl& m;
  const std::unordered_map<std::string, uint32_t>& index;

  uint32_t idx(const std::string& n) const {
    auto it = index.find(n);
    if (it == index.end()) throw InterfaceError("unknown signal '" + n + "'");
    return it->second;
  }

  std::pair<int32_t, int32_t> range(const std::string& n) const {
    if (const auto* p = m.find_port(n)) return {p->msb, p->lsb};
    if (const auto* d = m.find_net(n)) return {d->msb, d->lsb};
    return {0, 0};
  }

  CExpr expr(const hdl::Expr& e) const {
    CExpr c;
    c.kind = e.kind;
    c.width = e.width;
    switch (e.kind) {
      case ExprKind::Literal:
        c.lit = e.literal.bits;
        c.width = e.literal.width;
        break;
      case ExprKind::Ref:
        c.sig = idx(e.name);
        break;
      case ExprKind::BitSelect: {
        c.sig = idx(e.name);
        std::tie(c.decl_msb, c.decl_lsb) = range(e.name);
        c.args.push_back(expr(e.args[0]));
        break;
      }
      case ExprKind::PartSelect: {
        c.sig = idx(e.name);
        std::tie(c.decl_msb, c.decl_lsb) = range(e.name);
        c.sel_msb = e.msb;
        c.sel_lsb = e.lsb;
        break;
      }
      default:
        c.uop = e.uop;
        c.bop = e.bop;
        for (const auto& a : e.args) c.args.push_back(expr(a));
    }
    return c;
  }

  // Case labels are literals or parameter references; both are constants.
  std::pair<uint64_t, uint32_t> label(const hdl::Expr& e) const {
    if (e.kind == ExprKind::Literal) return {e.literal.bits, e.literal.width};
    const auto* p = m.find_param(e.name);
    assert(p);
    return {p->value.bits, p->value.width};
  }

  std::vector<CStmt> body(const std::vector<hdl::Stmt>& stmts) const {
    std::vector<CStmt> out;
    out.reserve(stmts.size());
    for (const auto& s : stmts) out.push_back(stmt(s));
    return out;
  }

  CStmt stmt(const hdl::Stmt& s) const {
    CStmt c;
    c.kind = s.kind;
    switch (s.kind) {
      case StmtKind::Assign:
        c.lhs = idx(s.lhs);
        c.lhs_width = m.width_of(s.lhs);
        c.nonblocking = s.assign_kind == hdl::AssignKind::NonBlocking;
        c.rhs = expr(s.rhs);
        break;
      case StmtKind::If:
        c.cond = expr(s.cond);
        c.then_body = body(s.then_body);
        c.else_body = body(s.else_body);
        break;
      case StmtKind::Case:
        c.subject = expr(s.subject);
        for (const auto& arm : s.arms) {
          CStmt::Arm a;
          for (const auto& l : arm.labels) a.labels.push_back(label(l));
          a.body = body(arm.body);
          c.arms.push_back(std::move(a));
        }
        c.has_default = s.has_default;
        c.default_body = body(s.default_body);
        break;
    }
    return c;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// SimModel
// ---------------------------------------------------------------------------

SimModel::SimModel(hdl::ModuleDecl design) : design_(std::move(design)) {
  auto add_signal = [&](const std::string& n, uint32_t w, uint64_t init) {
    index_.emplace(n, static_cast<uint32_t>(names_.size()));
    names_.push_back(n);
    widths_.push_back(w);
    initial_.push_back(init & width_mask(w));
  };
  for (const auto& p : design_.ports) {
    add_signal(p.name, p.width(), 0);
    if (p.dir == hdl::Direction::Input) inputs_.push_back(index_.at(p.name));
    else outputs_.push_back(index_.at(p.name));
  }
  for (const auto& p : design_.params) add_signal(p.name, p.value.width, p.value.bits);
  for (const auto& n : design_.nets) add_signal(n.name, n.width(), 0);

  level_watch_.resize(names_.size());
  edge_watch_.resize(names_.size());

  Compiler comp{design_, index_};

  // Continuous assigns behave as star-sensitive single-assignment processes.
  for (const auto& a : design_.assigns) {
    Proc p;
    hdl::Stmt s;
    s.kind = StmtKind::Assign;
    s.lhs = a.lhs;
    s.rhs = a.rhs;
    s.assign_kind = hdl::AssignKind::Blocking;
    p.body.push_back(comp.stmt(s));
    uint32_t pid = static_cast<uint32_t>(procs_.size());
    procs_.push_back(std::move(p));
    std::set<std::string> reads;
    hdl::collect_reads(a.rhs, reads);
    for (const auto& r : reads)
      if (!design_.find_param(r)) level_watch_[index_.at(r)].push_back(pid);
  }

  for (const auto& b : design_.blocks) {
    Proc p;
    const bool edge_triggered = b.is_sequential();
    p.edge_triggered = edge_triggered;
    p.body = comp.body(b.body);
    uint32_t pid = static_cast<uint32_t>(procs_.size());
    procs_.push_back(std::move(p));
    if (edge_triggered || !b.sens.star) {
      // Literal sensitivity: watch exactly the listed entries.
      for (const auto& e : b.sens.entries) {
        uint32_t sig = index_.at(e.signal);
        switch (e.edge) {
          case EdgeKind::Level: level_watch_[sig].push_back(pid); break;
          case EdgeKind::Posedge: edge_watch_[sig].push_back({pid, true}); break;
          case EdgeKind::Negedge: edge_watch_[sig].push_back({pid, false}); break;
        }
      }
    } else {
      std::set<std::string> reads;
      hdl::collect_reads(b.body, reads);
      for (const auto& r : reads)
        if (!design_.find_param(r)) level_watch_[index_.at(r)].push_back(pid);
    }
  }
}

uint32_t SimModel::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw InterfaceError("design '" + design_.name + "' has no signal '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// SimInstance
// ---------------------------------------------------------------------------

SimInstance::SimInstance(const SimModel& model, SimOptions opts)
    : model_(&model), opts_(opts) {
  reset_state();
}

void SimInstance::reset_state() {
  values_ = model_->initial_;
  pending_.assign(model_->procs_.size(), 0);
  pending_count_ = 0;
  nba_.clear();
  time_ = 0;
  // Bootstrap: every level-sensitive process evaluates once at time zero.
  for (uint32_t p = 0; p < model_->procs_.size(); ++p)
    if (!model_->procs_[p].edge_triggered) mark(p);
  settle();
}

void SimInstance::mark(uint32_t proc) {
  if (!pending_[proc]) {
    pending_[proc] = 1;
    ++pending_count_;
  }
}

void SimInstance::commit(uint32_t idx, uint64_t value) {
  value &= width_mask(model_->widths_[idx]);
  uint64_t old = values_[idx];
  if (old == value) return;
  values_[idx] = value;
  for (uint32_t p : model_->level_watch_[idx]) mark(p);
  if (!model_->edge_watch_[idx].empty()) {
    bool was = old & 1, now = value & 1;
    if (was != now)
      for (const auto& w : model_->edge_watch_[idx])
        if (w.pos == now) mark(w.proc);
  }
}

void SimInstance::drive(uint32_t input_idx, uint64_t value) {
  commit(input_idx, value);
}

void SimInstance::drive(const std::string& input, hdl::BitVec value) {
  commit(model_->index_of(input), value.bits);
}

uint64_t SimInstance::eval(const CExpr& e) const {
  switch (e.kind) {
    case ExprKind::Literal:
      return e.lit;
    case ExprKind::Ref:
      return values_[e.sig];
    case ExprKind::BitSelect: {
      auto bit = static_cast<int64_t>(eval(e.args[0]));
      if (bit < e.decl_lsb || bit > e.decl_msb) return 0;  // out-of-range reads 0
      return (values_[e.sig] >> (bit - e.decl_lsb)) & 1;
    }
    case ExprKind::PartSelect:
      return (values_[e.sig] >> (e.sel_lsb - e.decl_lsb)) & width_mask(e.width);
    case ExprKind::Concat: {
      uint64_t v = 0;
      for (const auto& a : e.args) v = (v << a.width) | eval(a);
      return v;
    }
    case ExprKind::Unary: {
      uint64_t a = eval(e.args[0]);
      switch (e.uop) {
        case UnaryOp::Not: return ~a & width_mask(e.width);
        case UnaryOp::Neg: return (~a + 1) & width_mask(e.width);
        case UnaryOp::LogicNot: return a == 0;
        case UnaryOp::RedAnd: return a == width_mask(e.args[0].width);
        case UnaryOp::RedOr: return a != 0;
        case UnaryOp::RedXor: return __builtin_parityll(a);
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
        case BinaryOp::LogicAnd: return a != 0 && b != 0;
        case BinaryOp::LogicOr: return a != 0 || b != 0;
        case BinaryOp::Add: return (a + b) & width_mask(e.width);
        case BinaryOp::Sub: return (a - b) & width_mask(e.width);
        case BinaryOp::Mul: return (a * b) & width_mask(e.width);
        case BinaryOp::Shl: return b >= 64 ? 0 : (a << b) & width_mask(e.width);
        case BinaryOp::Shr: return b >= 64 ? 0 : a >> b;
        case BinaryOp::Eq: return a == b;
        case BinaryOp::Ne: return a != b;
        case BinaryOp::Lt: return a < b;
        case BinaryOp::Le: return a <= b;
        case BinaryOp::Gt: return a > b;
        case BinaryOp::Ge: return a >= b;
      }
      return 0;
    }
    case ExprKind::Ternary:
      return eval(eval(e.args[0]) != 0 ? e.args[1] : e.args[2]) & width_mask(e.width);
  }
  return 0;
}

void SimInstance::exec(const std::vector<CStmt>& body) {
  for (const auto& s : body) {
    switch (s.kind) {
      case StmtKind::Assign: {
        uint64_t v = eval(s.rhs) & width_mask(s.lhs_width);
        if (s.nonblocking) nba_.emplace_back(s.lhs, v);
        else commit(s.lhs, v);
        break;
      }
      case StmtKind::If:
        exec(eval(s.cond) != 0 ? s.then_body : s.else_body);
        break;
      case StmtKind::Case: {
        uint64_t subj = eval(s.subject);
        const std::vector<CStmt>* chosen = s.has_default ? &s.default_body : nullptr;
        for (const auto& arm : s.arms) {
          bool hit = false;
          for (const auto& [v, w] : arm.labels) {
            (void)w;  // two-state compare at full value, both sides zero-extended
            if (v == subj) { hit = true; break; }
          }
          if (hit) {
            chosen = &arm.body;
            break;
          }
        }
        if (chosen) exec(*chosen);
        break;
      }
    }
  }
}

void SimInstance::flush_nba() {
  // Queue order is execution order; a later write to the same target wins.
  auto queue = std::move(nba_);
  nba_.clear();
  for (const auto& [idx, v] : queue) commit(idx, v);
}

void SimInstance::settle() {
  uint32_t deltas = 0;
  while (pending_count_ > 0 || !nba_.empty()) {
    if (++deltas > opts_.delta_limit) throw OscillationError(opts_.delta_limit);
    if (pending_count_ == 0) {
      flush_nba();
      continue;
    }
    // Snapshot the pending set; processes run in declaration order, newly
    // marked processes wait for the next delta.
    std::vector<uint32_t> active;
    active.reserve(pending_count_);
    for (uint32_t p = 0; p < pending_.size(); ++p) {
      if (pending_[p]) {
        active.push_back(p);
        pending_[p] = 0;
      }
    }
    pending_count_ = 0;
    for (uint32_t p : active) exec(model_->procs_[p].body);
    if (pending_count_ == 0 && !nba_.empty()) flush_nba();
  }
}

void SimInstance::tick(uint32_t clock_idx) {
  commit(clock_idx, 1);
  settle();
  commit(clock_idx, 0);
  settle();
  ++time_;
}

hdl::BitVec SimInstance::value(const std::string& name) const {
  uint32_t i = model_->index_of(name);
  return hdl::BitVec(model_->width_of(i), values_[i]);
}

SimInstance elaborate_sim(const SimModel& model, SimOptions opts) {
  return SimInstance(model, opts);
}

// ---------------------------------------------------------------------------
// Stimulus execution
// ---------------------------------------------------------------------------

namespace {

struct ProgramBinding {
  std::optional<uint32_t> clock;
  // Per-step plans resolved to indices once.
  struct BoundStep {
    std::vector<std::pair<uint32_t, uint64_t>> drives;
    std::vector<std::tuple<uint32_t, uint64_t, std::string>> expect;  // idx, value, name
    uint32_t ticks = 1;
  };
  std::vector<BoundStep> steps;
};

ProgramBinding bind_program(const SimModel& model, const StimulusProgram& program) {
  const auto& design = model.design();
  ProgramBinding b;
  if (program.clock) {
    const auto* p = design.find_port(*program.clock);
    if (!p || p->dir != hdl::Direction::Input || p->width() != 1)
      throw InterfaceError("clock '" + *program.clock + "' must be a 1-bit input of '" +
                           design.name + "'");
    b.clock = model.index_of(*program.clock);
  }
  for (const auto& step : program.steps) {
    ProgramBinding::BoundStep bs;
    bs.ticks = std::max<uint32_t>(step.ticks, 1);
    for (const auto& [name, val] : step.drives) {
      const auto* p = design.find_port(name);
      if (!p || p->dir != hdl::Direction::Input)
        throw InterfaceError("stimulus drives '" + name + "' which is not an input of '" +
                             design.name + "'");
      bs.drives.emplace_back(model.index_of(name), val.bits & BitVec::mask(p->width()));
    }
    for (const auto& [name, val] : step.expect) {
      const auto* p = design.find_port(name);
      if (!p || p->dir != hdl::Direction::Output)
        throw InterfaceError("stimulus expects '" + name + "' which is not an output of '" +
                             design.name + "'");
      bs.expect.emplace_back(model.index_of(name), val.bits & BitVec::mask(p->width()), name);
    }
    b.steps.push_back(std::move(bs));
  }
  return b;
}

template <typename PerStep>
Verdict run_bound(const SimModel& model, const ProgramBinding& b, SimOptions opts,
                  PerStep&& per_step) {
  SimInstance inst(model, opts);
  Verdict v;
  for (uint32_t si = 0; si < b.steps.size(); ++si) {
    const auto& step = b.steps[si];
    for (const auto& [idx, val] : step.drives) inst.drive(idx, val);
    inst.settle();
    if (b.clock)
      for (uint32_t t = 0; t < step.ticks; ++t) inst.tick(*b.clock);
    per_step(inst, si);
    for (const auto& [idx, expect_val, name] : step.expect) {
      uint64_t got = inst.raw_value(idx);
      if (got != expect_val) {
        v.passed = false;
        v.failing_step = si;
        v.failing_output = name;
        v.observed = hdl::BitVec(model.width_of(idx), got);
        v.expected = hdl::BitVec(model.width_of(idx), expect_val);
        v.cycles_run = inst.time();
        return v;
      }
    }
  }
  v.passed = true;
  v.cycles_run = inst.time();
  return v;
}

}  // namespace

Verdict run_stimulus(const SimModel& model, const StimulusProgram& program, SimOptions opts) {
  auto b = bind_program(model, program);
  return run_bound(model, b, opts, [](SimInstance&, uint32_t) {});
}

Verdict run_stimulus(const hdl::ModuleDecl& design, const StimulusProgram& program,
                     SimOptions opts) {
  SimModel model(design);
  return run_stimulus(model, program, opts);
}

std::vector<std::vector<uint64_t>> run_capture(const SimModel& model,
                                               const StimulusProgram& program,
                                               SimOptions opts) {
  auto b = bind_program(model, program);
  const auto& outs = model.output_indices();
  std::vector<std::vector<uint64_t>> rows(b.steps.size());
  run_bound(model, b, opts, [&](SimInstance& inst, uint32_t si) {
    auto& row = rows[si];
    row.reserve(outs.size());
    for (uint32_t o : outs) row.push_back(inst.raw_value(o));
  });
  return rows;
}

Verdict run_stimulus_traced(const SimModel& model, const StimulusProgram& program,
                            std::vector<TraceRow>& trace, SimOptions opts) {
  auto b = bind_program(model, program);
  return run_bound(model, b, opts, [&](SimInstance& inst, uint32_t si) {
    TraceRow row;
    row.step = si;
    row.time = inst.time();
    for (uint32_t i = 0; i < model.signal_count(); ++i)
      row.signals.emplace_back(model.name_of(i),
                               hdl::BitVec(model.width_of(i), inst.raw_value(i)));
    trace.push_back(std::move(row));
  });
}

}  // namespace rtlmut::sim
