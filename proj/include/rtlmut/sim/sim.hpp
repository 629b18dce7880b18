#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rtlmut/hdl/ast.hpp"
#include "rtlmut/sim/stimulus.hpp"

namespace rtlmut::sim {

class OscillationError : public std::runtime_error {
public:
  explicit OscillationError(uint32_t limit)
      : std::runtime_error("combinational logic failed to settle within " +
                           std::to_string(limit) + " delta cycles") {}
};

class InterfaceError : public std::runtime_error {
public:
  explicit InterfaceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SimOptions {
  uint32_t delta_limit = 1000;
};

namespace detail {

// Index-resolved expression IR; evaluation never touches identifier strings.
struct CExpr {
  hdl::ExprKind kind = hdl::ExprKind::Literal;
  uint64_t lit = 0;
  uint32_t width = 1;
  uint32_t sig = 0;      // Ref/BitSelect/PartSelect target
  int32_t decl_msb = 0;  // declared range of the select target
  int32_t decl_lsb = 0;
  int32_t sel_msb = 0;   // constant part-select bounds
  int32_t sel_lsb = 0;
  hdl::UnaryOp uop = hdl::UnaryOp::Not;
  hdl::BinaryOp bop = hdl::BinaryOp::And;
  std::vector<CExpr> args;
};

struct CStmt {
  hdl::StmtKind kind = hdl::StmtKind::Assign;
  uint32_t lhs = 0;
  uint32_t lhs_width = 1;
  bool nonblocking = false;
  CExpr rhs, cond, subject;
  std::vector<CStmt> then_body, else_body, default_body;
  struct Arm {
    std::vector<std::pair<uint64_t, uint32_t>> labels;  // (value, width)
    std::vector<CStmt> body;
  };
  std::vector<Arm> arms;
  bool has_default = false;
};

struct Proc {
  bool edge_triggered = false;
  std::vector<CStmt> body;
};

}  // namespace detail

// Static compilation of an elaborated design: signal table, index-resolved
// process bodies, and sensitivity watch lists. Immutable and shareable; many
// SimInstances may reference one model concurrently.
class SimModel {
public:
  explicit SimModel(hdl::ModuleDecl design);

  const hdl::ModuleDecl& design() const { return design_; }
  uint32_t signal_count() const { return static_cast<uint32_t>(names_.size()); }
  const std::string& name_of(uint32_t idx) const { return names_[idx]; }
  uint32_t width_of(uint32_t idx) const { return widths_[idx]; }
  // Throws InterfaceError for unknown names.
  uint32_t index_of(const std::string& name) const;
  bool has_signal(const std::string& name) const { return index_.count(name) != 0; }

  const std::vector<uint32_t>& input_indices() const { return inputs_; }
  const std::vector<uint32_t>& output_indices() const { return outputs_; }

private:
  friend class SimInstance;

  struct EdgeWatch {
    uint32_t proc;
    bool pos;
  };

  hdl::ModuleDecl design_;
  std::vector<std::string> names_;
  std::vector<uint32_t> widths_;
  std::unordered_map<std::string, uint32_t> index_;
  std::vector<uint64_t> initial_;  // zeros, parameters preset
  std::vector<detail::Proc> procs_;
  std::vector<std::vector<uint32_t>> level_watch_;    // signal -> proc ids
  std::vector<std::vector<EdgeWatch>> edge_watch_;    // signal -> edge procs
  std::vector<uint32_t> inputs_, outputs_;
};

// Dynamic simulation state over a shared SimModel. Single-owner during a run;
// construction performs the time-zero settle (regs zero-initialized,
// combinational logic settled once).
class SimInstance {
public:
  explicit SimInstance(const SimModel& model, SimOptions opts = {});

  // Back to time zero: regs cleared, combinational logic settled.
  void reset_state();

  // Applies a value to an input (edge triggers fire on the change); the
  // caller decides when to settle.
  void drive(uint32_t input_idx, uint64_t value);
  void drive(const std::string& input, hdl::BitVec value);

  // Runs delta cycles to a fixpoint of all pending processes and NBA flushes.
  // Throws OscillationError past the configured limit.
  void settle();

  // One full clock cycle: rising edge, settle, falling edge, settle.
  void tick(uint32_t clock_idx);

  uint64_t raw_value(uint32_t idx) const { return values_[idx]; }
  hdl::BitVec value(const std::string& name) const;
  uint64_t time() const { return time_; }
  const SimModel& model() const { return *model_; }

private:
  void mark(uint32_t proc);
  void commit(uint32_t idx, uint64_t value);
  void exec(const std::vector<detail::CStmt>& body);
  void flush_nba();
  uint64_t eval(const detail::CExpr& e) const;

  const SimModel* model_;
  SimOptions opts_;
  std::vector<uint64_t> values_;
  std::vector<uint8_t> pending_;
  uint32_t pending_count_ = 0;
  std::vector<std::pair<uint32_t, uint64_t>> nba_;
  uint64_t time_ = 0;
};

// Convenience wrapper matching the one-design/one-instance use of the CLI.
SimInstance elaborate_sim(const SimModel& model, SimOptions opts = {});

// Executes a stimulus program to a verdict: per step, apply drives, settle,
// advance the clock `ticks` times when the program has one, then check
// expectations. First mismatch halts. Throws InterfaceError on port/name
// problems and OscillationError on nonconvergence.
Verdict run_stimulus(const SimModel& model, const StimulusProgram& program,
                     SimOptions opts = {});
Verdict run_stimulus(const hdl::ModuleDecl& design, const StimulusProgram& program,
                     SimOptions opts = {});

// Runs the program ignoring expectations and captures every output after each
// step, in output_indices() order. Step-major result. Used by the validator.
std::vector<std::vector<uint64_t>> run_capture(const SimModel& model,
                                               const StimulusProgram& program,
                                               SimOptions opts = {});

// Per-step trace record for debugging (CLI --trace).
struct TraceRow {
  uint32_t step = 0;
  uint64_t time = 0;
  std::vector<std::pair<std::string, hdl::BitVec>> signals;
};
Verdict run_stimulus_traced(const SimModel& model, const StimulusProgram& program,
                            std::vector<TraceRow>& trace, SimOptions opts = {});

}  // namespace rtlmut::sim
