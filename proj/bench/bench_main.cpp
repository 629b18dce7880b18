// Timing harness comparing the serial reference comparator against the
// OpenMP kernel, and tree construction across worker counts. Build target:
// rtlmut_bench [vectors] [fixture.v ...]

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "rtlmut/hdl/parser.hpp"
#include "rtlmut/mutate/tree.hpp"
#include "rtlmut/validate/validate.hpp"

using namespace rtlmut;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

hdl::ModuleDecl load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return hdl::parse({ss.str(), path});
}

const char* kDefaultFixture = R"(
module bench_ctr(input clk, input rst_n, input en, input [7:0] step,
                 output reg [7:0] acc, output [7:0] gray);
  wire [7:0] next;
  assign next = acc + step;
  assign gray = acc ^ (acc >> 1);
  always @(posedge clk or negedge rst_n) begin
    if (!rst_n) acc <= 8'h0;
    else if (en) acc <= next;
  end
endmodule
)";

}  // namespace

int main(int argc, char** argv) {
  uint32_t vectors = argc > 1 ? static_cast<uint32_t>(std::stoul(argv[1])) : 10000;

  std::vector<std::pair<std::string, hdl::ModuleDecl>> designs;
  if (argc > 2) {
    for (int i = 2; i < argc; ++i) designs.emplace_back(argv[i], load(argv[i]));
  } else {
    designs.emplace_back("bench_ctr", hdl::parse({kDefaultFixture, "bench"}));
  }

  validate::RandomStimulusConfig cfg;
  cfg.vectors = vectors;
  cfg.mismatch_cap = 0;  // full counting keeps the work identical everywhere
  cfg.seed = 42;

  printf("compare: %u vectors x %u cycles, clean pair (full count)\n", cfg.vectors,
         cfg.cycles_per_vector);
  for (const auto& [name, design] : designs) {
    sim::SimModel a(design), b(design);

    auto t0 = std::chrono::steady_clock::now();
    auto serial = validate::compare_serial(a, b, cfg);
    double t_serial = seconds_since(t0);
    printf("  %-16s serial              %8.3fs  (%u vectors)\n", name.c_str(), t_serial,
           serial.vectors_run);

    for (int threads : {1, 2, 4, 8}) {
      t0 = std::chrono::steady_clock::now();
      auto parallel = validate::compare(a, b, cfg, threads);
      double t_par = seconds_since(t0);
      bool same = parallel == serial;
      printf("  %-16s omp x%-2d             %8.3fs  speedup %5.2f  identical=%s\n", name.c_str(),
             threads, t_par, t_serial / t_par, same ? "yes" : "NO");
      if (!same) return 1;
    }
  }

  printf("tree build: n=5 n1=3 depth=2, 512-vector validation\n");
  for (const auto& [name, design] : designs) {
    mutate::TreeConfig tc;
    tc.n_equivalents = 5;
    tc.n_level1 = 3;
    tc.max_depth = 2;
    tc.vectors_per_validation = 512;
    tc.seed = 7;
    std::string base_fp;
    for (int threads : {1, 2, 4, 8}) {
      auto t0 = std::chrono::steady_clock::now();
      auto tree = mutate::build_tree(design, tc, threads);
      double dt = seconds_since(t0);
      std::string fp;
      for (const auto& n : tree.nodes) fp += n.fingerprint;
      if (base_fp.empty()) base_fp = fp;
      printf("  %-16s omp x%-2d  %8.3fs  %zu nodes  identical=%s\n", name.c_str(), threads, dt,
             tree.nodes.size(), fp == base_fp ? "yes" : "NO");
      if (fp != base_fp) return 1;
    }
  }
  return 0;
}
