#pragma once

#include "rtlmut/hdl/ast.hpp"

namespace rtlmut::hdl {

// Parses and elaborates one MiniRTL module. Throws HdlError with a structured
// diagnostic on syntax errors, unresolved identifiers, width violations or
// driver conflicts. The returned AST carries inferred widths on every
// expression node.
ModuleDecl parse(const SourceUnit& source);

// Re-runs elaboration on an already-built AST (used after mutation rewrites).
// Throws HdlError if the rewritten module no longer elaborates.
void elaborate(ModuleDecl& m);

// Names that may not be used as identifiers.
bool is_keyword(const std::string& word);

}  // namespace rtlmut::hdl
