#pragma once

#include <string>

#include "relsy/smt/model.hpp"
#include "relsy/symexec/exec.hpp"
#include "relsy/testcase.hpp"

namespace relsy {

// Reads a satisfying model back into concrete inputs and outputs using the
// symbol bindings recorded during symbolic execution.  Table rows come from
// evaluating the membership predicate over the model's finite universe of
// the table's sort; duplicate tuples collapse (primary-key uniqueness makes
// universe-element duplication benign).  Throws smt::IncompleteModel when a
// needed interpretation is missing or implausible.
TestCase extract_testcase(const smt::Model& model, const Bindings& bindings,
                          const std::string& pathLabel);

}  // namespace relsy
