#pragma once

#include <vector>

#include "relsy/ast.hpp"

namespace relsy {

// Method-level semantic checks against a schema: every variable declared
// before use (Java-style lexical scoping), declared kinds respected, every
// SQL reference (table, attribute, INSERT arity, getInt against the query's
// projection) resolves.  Returns an empty list when the method is well-formed.
std::vector<Diagnostic> validate(const Schema& schema, const MethodAst& method);

}  // namespace relsy
