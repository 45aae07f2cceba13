#pragma once

#include <string_view>

#include "relsy/ast.hpp"

namespace relsy {

// Parses a sequence of CREATE TABLE statements.  Throws ParseError on syntax
// errors and on schema-level semantic errors (duplicate table, unknown
// referenced table/attribute, foreign key not targeting a primary key, ...).
Schema parse_schema(std::string_view src);

// Parses one method in the embedded Java subset.  SQL strings passed to
// execute/executeQuery are reassembled from their string-concatenation parts
// and parsed; spliced host expressions are only legal where the SQL grammar
// expects a scalar value.  Throws ParseError on syntax errors and unsupported
// constructs.
MethodAst parse_method(std::string_view src);

}  // namespace relsy
