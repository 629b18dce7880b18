#pragma once

#include <iosfwd>

namespace rtlmut::cli {

// Full command-line entry point; the rtlmut binary is a thin wrapper around
// this so tests can drive the real CLI in-process with captured streams.
// Returns the process exit code.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rtlmut::cli
