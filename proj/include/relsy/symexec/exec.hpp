#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relsy/ast.hpp"
#include "relsy/paths.hpp"
#include "relsy/smt/system.hpp"
#include "relsy/symexec/env.hpp"

namespace relsy {

// Which emitted symbols represent which program entities, for model
// extraction and replay.
struct TableBinding {
  std::string member;                                       // membership predicate
  std::vector<std::pair<std::string, std::string>> attrs;   // attr name -> function
};
struct RsBinding {
  std::string stem;     // result-set instance, e.g. "shelves1"
  std::string table;
  std::string sizeSym;
  std::string listSym;
  std::vector<std::pair<std::string, std::string>> attrs;   // query-time versions
};
struct Bindings {
  std::map<std::string, TableBinding> inputTables;
  std::map<std::string, TableBinding> outputTables;
  std::vector<std::pair<std::string, std::string>> inputLists;   // param -> symbol
  std::vector<std::pair<std::string, std::string>> outputLists;  // param -> final symbol
  std::vector<std::string> scanner;                              // read order
  std::optional<std::string> returnSym;
  bool returnIsList = false;
  std::vector<RsBinding> resultSets;  // creation order
};

struct ExecResult {
  smt::ConstraintSystem system;
  Bindings bindings;
};

// Raised when no input whatsoever can drive execution down the path: a
// requested failure branch with an empty violation disjunction (e.g. deleting
// from a table nothing references), or getInt before any next().
struct StaticallyInfeasiblePath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symbolically executes one enumerated path of the method, producing the
// constraint system whose solutions are exactly the input states (database
// content, list parameters, scanner values) that drive execution down that
// path, together with the induced outputs.
ExecResult exec_path(const Schema& schema, const MethodAst& method, const Path& path);

}  // namespace relsy
