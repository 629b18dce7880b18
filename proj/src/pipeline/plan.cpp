#include "rtlmut/pipeline/plan.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace rtlmut::pipeline {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

enum Section { kDifference = 0, kStimuli, kExpected, kReasoning, kNone };

// Accepted spellings per section, longest first so "input stimuli" wins over
// "stimuli" when both could match.
const std::array<std::vector<std::string>, 4> kAliases = {{
    {"difference"},
    {"input stimuli", "stimuli", "stimulus"},
    {"expected outputs", "expected output", "expected_outputs"},
    {"supporting reasoning", "reasoning"},
}};

// A header line is optional markdown decoration, an alias, optional closing
// decoration, then ':' or end of line. Returns the content after the colon.
bool match_header(const std::string& raw, Section& out, std::string& rest) {
  std::string line = raw;
  size_t i = 0;
  while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) ||
                             line[i] == '#' || line[i] == '*' || line[i] == '-' ||
                             line[i] == '>' || line[i] == '(' ||
                             std::isdigit(static_cast<unsigned char>(line[i])) ||
                             line[i] == ')' || line[i] == '.'))
    ++i;
  std::string body = lower(line.substr(i));
  for (int s = 0; s < 4; ++s) {
    for (const auto& alias : kAliases[static_cast<size_t>(s)]) {
      if (body.size() < alias.size()) continue;
      if (body.compare(0, alias.size(), alias) != 0) continue;
      size_t j = alias.size();
      while (j < body.size() && (body[j] == '*' || body[j] == ' ' || body[j] == '\t')) ++j;
      if (j == body.size()) {
        out = static_cast<Section>(s);
        rest.clear();
        return true;
      }
      if (body[j] == ':') {
        out = static_cast<Section>(s);
        rest = trim(line.substr(i + j + 1));
        return true;
      }
    }
  }
  return false;
}

}  // namespace

TestPlan parse_test_plan(const std::string& text) {
  std::array<std::string, 4> sections;
  Section current = kNone;
  std::istringstream in(text);
  std::string line;
  auto append = [&](Section s, const std::string& content) {
    if (content.empty()) return;
    auto& dst = sections[static_cast<size_t>(s)];
    if (!dst.empty()) dst += "\n";
    dst += content;
  };
  while (std::getline(in, line)) {
    Section s;
    std::string rest;
    if (match_header(line, s, rest)) {
      current = s;
      append(s, rest);
      continue;
    }
    if (current != kNone) append(current, trim(line));
  }
  static const char* kNames[4] = {"difference", "stimuli", "expected_outputs", "reasoning"};
  for (int s = 0; s < 4; ++s) {
    if (trim(sections[static_cast<size_t>(s)]).empty())
      throw MissingSectionError(kNames[s],
                                std::string("test plan is missing its '") + kNames[s] + "' section");
  }
  TestPlan p;
  p.difference = trim(sections[0]);
  p.stimuli = trim(sections[1]);
  p.expected_outputs = trim(sections[2]);
  p.reasoning = trim(sections[3]);
  return p;
}

std::string plan_to_text(const TestPlan& plan) {
  return "Difference: " + plan.difference + "\n\nStimuli: " + plan.stimuli +
         "\n\nExpected Outputs: " + plan.expected_outputs + "\n\nReasoning: " + plan.reasoning +
         "\n";
}

}  // namespace rtlmut::pipeline
