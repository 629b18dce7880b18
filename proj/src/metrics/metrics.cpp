#include "rtlmut/metrics/metrics.hpp"

#include <sstream>
#include <stdexcept>

namespace rtlmut::metrics {

std::string circuit_type_name(CircuitType t) {
  return t == CircuitType::Sequential ? "sequential" : "combinational";
}

CircuitType classify_circuit(const hdl::ModuleDecl& m) {
  for (const auto& b : m.blocks)
    if (b.is_sequential()) return CircuitType::Sequential;
  return CircuitType::Combinational;
}

BenchmarkReport compute_metrics(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw std::invalid_argument("compute_metrics: no records");
  BenchmarkReport r;
  r.records = static_cast<uint32_t>(records.size());
  std::map<std::string, uint32_t> pass_by_type, detect_by_type;
  uint32_t m1_hits = 0, m2_hits = 0;
  for (const auto& rec : records) {
    std::string type = circuit_type_name(rec.circuit_type);
    ++r.count_by_type[type];
    bool golden_pass = rec.golden_verdict.passed;
    bool detected = golden_pass && !rec.mutation_verdict.passed;
    if (golden_pass) {
      ++m1_hits;
      ++pass_by_type[type];
    }
    if (detected) {
      ++m2_hits;
      ++detect_by_type[type];
    }
    if (!rec.category.empty()) {
      auto& [det, total] = r.by_category[rec.category];
      ++total;
      if (detected) ++det;
    }
  }
  r.m1 = static_cast<double>(m1_hits) / static_cast<double>(records.size());
  r.m2 = static_cast<double>(m2_hits) / static_cast<double>(records.size());
  for (const auto& [type, count] : r.count_by_type) {
    r.m1_by_type[type] = static_cast<double>(pass_by_type[type]) / count;
    r.m2_by_type[type] = static_cast<double>(detect_by_type[type]) / count;
  }
  return r;
}

std::string report_table(const BenchmarkReport& r) {
  std::ostringstream os;
  char line[128];
  os << "records: " << r.records << "\n";
  snprintf(line, sizeof line, "M1 golden pass:        %6.2f%%\n", r.m1 * 100.0);
  os << line;
  snprintf(line, sizeof line, "M2 mutation detection: %6.2f%%\n", r.m2 * 100.0);
  os << line;
  for (const auto& [type, count] : r.count_by_type) {
    snprintf(line, sizeof line, "  %-14s n=%-5u M1=%6.2f%%  M2=%6.2f%%\n", type.c_str(), count,
             r.m1_by_type.at(type) * 100.0, r.m2_by_type.at(type) * 100.0);
    os << line;
  }
  if (!r.by_category.empty()) {
    os << "detection by mutation category:\n";
    for (const auto& [cat, dt] : r.by_category) {
      snprintf(line, sizeof line, "  %-26s %u/%u\n", cat.c_str(), dt.first, dt.second);
      os << line;
    }
  }
  if (!r.config_fingerprint.empty()) os << "config: " << r.config_fingerprint << "\n";
  return os.str();
}

}  // namespace rtlmut::metrics
