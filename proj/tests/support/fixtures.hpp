#pragma once

#include <map>
#include <string>
#include <vector>

#include "rtlmut/hdl/ast.hpp"

namespace testsupport {

struct Fixture {
  std::string name;
  rtlmut::hdl::SourceUnit source;
  rtlmut::hdl::ModuleDecl module;  // elaborated
  std::string label;               // "combinational" | "sequential"
};

// Loads every .v design from the bundled corpus (RTLMUT_FIXTURE_DIR), sorted
// by name, with hand labels from labels.json.
const std::vector<Fixture>& corpus();

const Fixture& fixture(const std::string& name);

std::string fixture_path(const std::string& file);

}  // namespace testsupport
