#include "rtlmut/validate/validate.hpp"

#include "rtlmut/hdl/walk.hpp"

#include <omp.h>

#include <algorithm>

#include "rtlmut/util/rng.hpp"

namespace rtlmut::validate {

using hdl::BitVec;
using sim::StimulusProgram;

std::optional<std::string> find_clock(const std::vector<hdl::PortDecl>& ports) {
  return hdl::find_clock_port(ports);
}

std::optional<sim::ResetSpec> find_reset(const std::vector<hdl::PortDecl>& ports) {
  if (auto r = hdl::find_reset_port(ports)) return sim::ResetSpec{r->name, r->active_low};
  return std::nullopt;
}

namespace {

uint64_t sample_value(Rng& rng, uint32_t width, InputDistribution dist) {
  uint64_t mask = BitVec::mask(width);
  if (dist == InputDistribution::BiasedCorner) {
    double d = rng.next_double();
    if (d < 0.25) return 0;
    if (d < 0.50) return mask;
    if (d < 0.75) return (1ULL << rng.next_below(width)) & mask;
  }
  return rng.next_u64() & mask;
}

}  // namespace

StimulusProgram gen_random_program(const std::vector<hdl::PortDecl>& iface,
                                   const RandomStimulusConfig& cfg, uint64_t index) {
  Rng rng(Rng::mix(cfg.seed, index));
  StimulusProgram prog;
  prog.clock = find_clock(iface);
  prog.reset = find_reset(iface);
  uint32_t cycles = std::max<uint32_t>(cfg.cycles_per_vector, 1);
  for (uint32_t c = 0; c < cycles; ++c) {
    sim::Step step;
    step.ticks = 1;
    if (prog.reset) {
      bool active = c == 0 || rng.next_bool(cfg.reset_toggle_probability);
      uint64_t level = prog.reset->active_low ? (active ? 0 : 1) : (active ? 1 : 0);
      step.drives.emplace(prog.reset->signal, BitVec(1, level));
    }
    for (const auto& p : iface) {
      if (p.dir != hdl::Direction::Input) continue;
      if (prog.clock && p.name == *prog.clock) continue;
      if (prog.reset && p.name == prog.reset->signal) continue;
      step.drives.emplace(p.name, BitVec(p.width(), sample_value(rng, p.width(), cfg.input_distribution)));
    }
    prog.steps.push_back(std::move(step));
  }
  return prog;
}

void check_same_interface(const hdl::ModuleDecl& golden, const hdl::ModuleDecl& candidate) {
  auto key = [](const hdl::ModuleDecl& m) {
    std::vector<std::tuple<std::string, int, uint32_t>> k;
    for (const auto& p : m.ports)
      k.emplace_back(p.name, p.dir == hdl::Direction::Input ? 0 : 1, p.width());
    std::sort(k.begin(), k.end());
    return k;
  };
  if (key(golden) != key(candidate))
    throw sim::InterfaceError("golden and candidate port interfaces differ ('" + golden.name +
                              "' vs '" + candidate.name + "')");
}

namespace {

// Everything compare needs to know about one vector; pure function of
// (models, cfg, index) so vectors evaluate in any order on any thread.
struct VectorOutcome {
  uint64_t mismatch_cycles = 0;
  bool has_first = false;
  FirstMismatch first;
  bool oscillated = false;
};

VectorOutcome eval_vector(const sim::SimModel& golden, const sim::SimModel& candidate,
                          const RandomStimulusConfig& cfg, uint64_t index) {
  VectorOutcome out;
  auto program = gen_random_program(golden.design().ports, cfg, index);
  sim::SimOptions opts{cfg.delta_limit};
  std::vector<std::vector<uint64_t>> rows_g, rows_c;
  try {
    rows_g = sim::run_capture(golden, program, opts);
    rows_c = sim::run_capture(candidate, program, opts);
  } catch (const sim::OscillationError&) {
    out.oscillated = true;
    return out;
  }
  const auto& outs = golden.output_indices();
  for (uint32_t step = 0; step < rows_g.size(); ++step) {
    const auto& rg = rows_g[step];
    const auto& rc = rows_c[step];
    for (uint32_t o = 0; o < outs.size(); ++o) {
      if (rg[o] != rc[o]) {
        ++out.mismatch_cycles;
        if (!out.has_first) {
          out.has_first = true;
          out.first.vector = static_cast<uint32_t>(index);
          out.first.cycle = step;
          out.first.output = golden.name_of(outs[o]);
          uint32_t w = golden.width_of(outs[o]);
          out.first.golden = BitVec(w, rg[o]);
          out.first.candidate = BitVec(w, rc[o]);
        }
        break;  // one mismatch per cycle
      }
    }
  }
  return out;
}

// Serial fold shared by both kernels; folding order is vector order, which is
// what makes parallel and serial reports identical.
class ReportFolder {
public:
  explicit ReportFolder(const RandomStimulusConfig& cfg) : cfg_(cfg) {}

  // Returns false once folding should stop.
  bool fold(const VectorOutcome& v) {
    ++report_.vectors_run;
    if (v.oscillated) {
      report_.oscillation = true;
      return false;
    }
    report_.mismatches += v.mismatch_cycles;
    if (v.has_first && !report_.first_mismatch) report_.first_mismatch = v.first;
    if (cfg_.mismatch_cap > 0 && report_.mismatches >= cfg_.mismatch_cap) {
      report_.capped = true;
      return false;
    }
    return true;
  }

  ValidationReport finish() {
    report_.classification = (report_.mismatches > 0 || report_.oscillation)
                                 ? Classification::Mutated
                                 : Classification::Clean;
    return report_;
  }

private:
  RandomStimulusConfig cfg_;
  ValidationReport report_;
};

}  // namespace

ValidationReport compare_serial(const sim::SimModel& golden, const sim::SimModel& candidate,
                                const RandomStimulusConfig& cfg) {
  check_same_interface(golden.design(), candidate.design());
  ReportFolder folder(cfg);
  for (uint64_t v = 0; v < cfg.vectors; ++v)
    if (!folder.fold(eval_vector(golden, candidate, cfg, v))) break;
  return folder.finish();
}

ValidationReport compare(const sim::SimModel& golden, const sim::SimModel& candidate,
                         const RandomStimulusConfig& cfg, int threads) {
  check_same_interface(golden.design(), candidate.design());
  if (threads <= 0) threads = omp_get_max_threads();
  constexpr uint32_t kBlock = 32;
  ReportFolder folder(cfg);
  std::vector<VectorOutcome> block(kBlock);
  bool stop = false;
  for (uint64_t base = 0; base < cfg.vectors && !stop; base += kBlock) {
    uint32_t n = static_cast<uint32_t>(std::min<uint64_t>(kBlock, cfg.vectors - base));
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < static_cast<int>(n); ++i)
      block[static_cast<uint32_t>(i)] =
          eval_vector(golden, candidate, cfg, base + static_cast<uint64_t>(i));
    for (uint32_t i = 0; i < n; ++i) {
      if (!folder.fold(block[i])) {
        stop = true;
        break;
      }
    }
  }
  return folder.finish();
}

ValidationReport compare(const hdl::ModuleDecl& golden, const hdl::ModuleDecl& candidate,
                         const RandomStimulusConfig& cfg, int threads) {
  sim::SimModel mg(golden), mc(candidate);
  return compare(mg, mc, cfg, threads);
}

}  // namespace rtlmut::validate
