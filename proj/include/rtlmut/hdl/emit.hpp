#pragma once

#include "rtlmut/hdl/ast.hpp"

namespace rtlmut::hdl {

// Deterministic pretty-printer: structurally identical ASTs produce
// byte-identical text, and parse(emit(m)) is structurally equal to m.
SourceUnit emit(const ModuleDecl& m);

// Fragment printers, used for before/after snippets in mutation records.
std::string emit_expr(const Expr& e);
std::string emit_stmt(const Stmt& s, int indent = 0);
std::string emit_literal(const BitVec& v);

// Stable structural digest: invariant under whitespace/comment differences,
// sensitive to any structural change (renames included). Hex string form.
std::string ast_fingerprint(const ModuleDecl& m);

}  // namespace rtlmut::hdl
