#pragma once

#include <string>

#include "relsy/ast.hpp"

namespace relsy {

// Canonical source forms.  parse(print(x)) reproduces the same tree, which
// the round-trip tests check by comparing printed forms.
std::string print_schema(const Schema& schema);
std::string print_method(const MethodAst& method);

// Exposed for diagnostics and tests.
std::string print_int_expr(const IntExpr& e);
std::string print_cond(const Cond& c);
std::string print_db_write(const DbWrite& w);
std::string print_select(const SelectQuery& q);

}  // namespace relsy
