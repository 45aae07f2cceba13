#pragma once

#include <string>

#include "relsy/smt/system.hpp"

namespace relsy::smt {

// SMT-Lib text of one term.  Negative integers render as (- n).
std::string render_term(const Term& t);
std::string render_term(const TermPtr& t);

// Whole script, one item per line.  With `checkSat`, a final
// (check-sat)/(get-model) pair is appended so the script can be piped to a
// solver as-is.
std::string render_script(const ConstraintSystem& sys, bool checkSat);

}  // namespace relsy::smt
