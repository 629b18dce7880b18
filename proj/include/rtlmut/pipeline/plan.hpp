#pragma once

#include <stdexcept>
#include <string>

namespace rtlmut::pipeline {

// The four-section intermediate artifact between reading a spec and building
// a testbench: what differs, how to provoke it, what to expect, and why.
struct TestPlan {
  std::string difference;
  std::string stimuli;
  std::string expected_outputs;
  std::string reasoning;

  friend bool operator==(const TestPlan&, const TestPlan&) = default;
};

class MissingSectionError : public std::runtime_error {
public:
  MissingSectionError(std::string section_, const std::string& msg)
      : std::runtime_error(msg), section(std::move(section_)) {}
  std::string section;
};

// Extracts the four labeled sections. Order-insensitive and tolerant of
// surrounding prose and markdown-ish header decoration; throws
// MissingSectionError naming the first absent section.
TestPlan parse_test_plan(const std::string& text);

// Canonical four-section rendering (inverse of the parser's happy path).
std::string plan_to_text(const TestPlan& plan);

}  // namespace rtlmut::pipeline
