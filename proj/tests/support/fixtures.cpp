#include "support/fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rtlmut/hdl/parser.hpp"

namespace testsupport {

namespace fs = std::filesystem;

std::string fixture_path(const std::string& file) {
  return std::string(RTLMUT_FIXTURE_DIR) + "/" + file;
}

const std::vector<Fixture>& corpus() {
  static const std::vector<Fixture> fixtures = [] {
    std::ifstream lf(fixture_path("labels.json"));
    if (!lf) throw std::runtime_error("missing fixtures/labels.json");
    nlohmann::json labels = nlohmann::json::parse(lf);

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(RTLMUT_FIXTURE_DIR))
      if (entry.path().extension() == ".v") files.push_back(entry.path().filename().string());
    std::sort(files.begin(), files.end());

    std::vector<Fixture> out;
    for (const auto& file : files) {
      Fixture f;
      f.name = file.substr(0, file.size() - 2);
      std::ifstream in(fixture_path(file));
      std::ostringstream ss;
      ss << in.rdbuf();
      f.source = {ss.str(), file};
      f.module = rtlmut::hdl::parse(f.source);
      f.label = labels.value(f.name, "");
      if (f.label.empty())
        throw std::runtime_error("fixture '" + f.name + "' has no label in labels.json");
      out.push_back(std::move(f));
    }
    return out;
  }();
  return fixtures;
}

const Fixture& fixture(const std::string& name) {
  for (const auto& f : corpus())
    if (f.name == name) return f;
  throw std::runtime_error("no fixture named '" + name + "'");
}

}  // namespace testsupport
