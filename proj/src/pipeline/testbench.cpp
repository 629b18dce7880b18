#include "rtlmut/pipeline/pipeline.hpp"

#include "rtlmut/hdl/walk.hpp"

namespace rtlmut::pipeline {

TestbenchTemplate make_template(const std::vector<hdl::PortDecl>& ports) {
  if (ports.empty()) throw std::invalid_argument("make_template: empty port list");
  TestbenchTemplate t;
  t.ports = ports;
  t.clock = hdl::find_clock_port(ports);
  if (auto r = hdl::find_reset_port(ports)) t.reset = sim::ResetSpec{r->name, r->active_low};

  std::string s = "// interface under test:\n";
  for (const auto& p : ports) {
    s += "//   ";
    s += p.dir == hdl::Direction::Input ? "input  " : "output ";
    s += p.name + " (" + std::to_string(p.width()) + " bit" + (p.width() == 1 ? "" : "s") + ")";
    if (t.clock && p.name == *t.clock) s += "  [clock: driven by the harness]";
    if (t.reset && p.name == t.reset->signal)
      s += std::string("  [reset, active-") + (t.reset->active_low ? "low" : "high") + "]";
    s += "\n";
  }
  s += "{\n  \"schema\": \"rtlmut.stimulus.v1\",\n";
  if (t.clock) s += "  \"clock\": \"" + *t.clock + "\",\n";
  if (t.reset)
    s += "  \"reset\": {\"signal\": \"" + t.reset->signal +
         "\", \"active_low\": " + (t.reset->active_low ? "true" : "false") + "},\n";
  s += "  \"steps\": [\n";

  // First step: reset asserted, everything else quiet.
  std::string drive0, driveN, expectN;
  for (const auto& p : ports) {
    if (p.dir != hdl::Direction::Input) {
      if (!expectN.empty()) expectN += ", ";
      expectN += "\"" + p.name + "\": \"<FILL>\"";
      continue;
    }
    if (t.clock && p.name == *t.clock) continue;
    if (!drive0.empty()) drive0 += ", ";
    if (!driveN.empty()) driveN += ", ";
    if (t.reset && p.name == t.reset->signal) {
      drive0 += "\"" + p.name + "\": " + (t.reset->active_low ? "0" : "1");
      driveN += "\"" + p.name + "\": " + (t.reset->active_low ? "1" : "0");
    } else {
      drive0 += "\"" + p.name + "\": 0";
      driveN += "\"" + p.name + "\": \"<FILL>\"";
    }
  }
  if (t.reset) s += "    {\"drive\": {" + drive0 + "}, \"ticks\": 1},\n";
  s += "    {\"drive\": {" + driveN + "}, \"ticks\": 1";
  if (!expectN.empty()) s += ", \"expect\": {" + expectN + "}";
  s += "}\n";
  s += "    // <FILL: add one step per cycle of the plan; \"expect\" checks after the step settles>\n";
  s += "  ]\n}\n";
  t.skeleton = std::move(s);
  return t;
}

}  // namespace rtlmut::pipeline
