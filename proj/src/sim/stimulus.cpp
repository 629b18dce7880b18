#include "rtlmut/sim/stimulus.hpp"

#include <json.hpp>

namespace rtlmut::sim {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "rtlmut.stimulus.v1";

// Values arrive as JSON integers, "0x.." / decimal strings, or Verilog-style
// sized literals ("4'hA"). Width is resolved against the design at bind time,
// so only the numeric value matters here.
uint64_t parse_value(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<uint64_t>();
  if (j.is_number_integer()) {
    auto v = j.get<int64_t>();
    if (v < 0) throw std::runtime_error("negative value for " + where);
    return static_cast<uint64_t>(v);
  }
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.empty()) throw std::runtime_error("empty value string for " + where);
    size_t tick = s.find('\'');
    int base = 10;
    std::string digits = s;
    if (tick != std::string::npos) {
      if (tick + 1 >= s.size()) throw std::runtime_error("malformed literal for " + where);
      char b = s[tick + 1];
      base = (b == 'h' || b == 'H') ? 16 : (b == 'b' || b == 'B') ? 2 : 10;
      digits = s.substr(tick + 2);
    } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
      base = 16;
      digits = s.substr(2);
    } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
      base = 2;
      digits = s.substr(2);
    }
    uint64_t v = 0;
    bool any = false;
    for (char c : digits) {
      if (c == '_') continue;
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else throw std::runtime_error("bad digit '" + std::string(1, c) + "' in " + where);
      if (d >= base) throw std::runtime_error("digit out of base range in " + where);
      v = v * static_cast<uint64_t>(base) + static_cast<uint64_t>(d);
      any = true;
    }
    if (!any) throw std::runtime_error("no digits in value for " + where);
    return v;
  }
  throw std::runtime_error("value for " + where + " must be an integer or string");
}

std::map<std::string, hdl::BitVec> parse_value_map(const json& j, const std::string& where) {
  std::map<std::string, hdl::BitVec> out;
  if (!j.is_object()) throw std::runtime_error(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    out.emplace(it.key(), hdl::BitVec(64, parse_value(it.value(), where + "." + it.key())));
  return out;
}

}  // namespace

std::string to_json(const StimulusProgram& p) {
  json j;
  j["schema"] = kSchema;
  if (p.clock) j["clock"] = *p.clock;
  if (p.reset) j["reset"] = {{"signal", p.reset->signal}, {"active_low", p.reset->active_low}};
  json steps = json::array();
  for (const auto& s : p.steps) {
    json step;
    json drive = json::object();
    for (const auto& [k, v] : s.drives) drive[k] = v.bits;
    step["drive"] = std::move(drive);
    if (!s.expect.empty()) {
      json expect = json::object();
      for (const auto& [k, v] : s.expect) expect[k] = v.bits;
      step["expect"] = std::move(expect);
    }
    if (s.ticks != 1) step["ticks"] = s.ticks;
    steps.push_back(std::move(step));
  }
  j["steps"] = std::move(steps);
  return j.dump(2) + "\n";
}

StimulusProgram program_from_json(const std::string& json_text) {
  json j = json::parse(json_text);  // throws nlohmann parse_error with location
  if (!j.is_object()) throw std::runtime_error("stimulus program must be a JSON object");
  if (j.contains("schema") && j["schema"] != kSchema)
    throw std::runtime_error("unsupported stimulus schema '" +
                             j["schema"].get<std::string>() + "'");
  StimulusProgram p;
  if (j.contains("clock") && !j["clock"].is_null()) p.clock = j["clock"].get<std::string>();
  if (j.contains("reset") && !j["reset"].is_null()) {
    ResetSpec r;
    r.signal = j["reset"].at("signal").get<std::string>();
    r.active_low = j["reset"].value("active_low", false);
    p.reset = r;
  }
  if (!j.contains("steps") || !j["steps"].is_array())
    throw std::runtime_error("stimulus program needs a 'steps' array");
  uint32_t si = 0;
  for (const auto& js : j["steps"]) {
    std::string where = "steps[" + std::to_string(si++) + "]";
    Step s;
    if (js.contains("drive")) s.drives = parse_value_map(js["drive"], where + ".drive");
    if (js.contains("expect")) s.expect = parse_value_map(js["expect"], where + ".expect");
    s.ticks = js.value("ticks", 1u);
    if (s.ticks < 1) throw std::runtime_error(where + ".ticks must be >= 1");
    p.steps.push_back(std::move(s));
  }
  return p;
}

}  // namespace rtlmut::sim
