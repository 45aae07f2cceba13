#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relsy/ast.hpp"
#include "relsy/paths.hpp"
#include "relsy/testcase.hpp"

namespace relsy::oracle {

// How a concrete execution ended.  Abnormal terminals discard the open
// transaction's uncommitted changes, exactly like an exception propagating
// out of the method before the implicit final commit.
enum class Terminal {
    Completed,             // ran to return / end of body; final commit done
    AssertViolation,       // an assert evaluated false
    UncaughtSqlViolation,  // a write with no handler was rejected
    ScannerExhausted,      // the input stream ran out of values
    RuntimeError,          // null list use, bad index, or cursor misuse
};
const char* terminal_name(Terminal t);

// What one SELECT saw and the order it served rows in (full tuples in
// attribute declaration order).  `rows` is the order actually used; a
// different permutation of the same rows is an equally legal execution.
struct SelectTrace {
    std::string rs;     // result-set label, e.g. "shelves1"
    std::string table;
    std::vector<std::vector<Integer>> rows;
};

struct Trace {
    std::vector<Decision> decisions;
    Terminal terminal = Terminal::Completed;
    std::string detail;  // human-readable cause for abnormal terminals

    DbTables finalTables;
    std::map<std::string, std::optional<std::vector<Integer>>> finalLists;
    bool hasReturn = false;
    bool returnIsList = false;
    std::optional<Integer> returnInt;
    std::optional<std::vector<Integer>> returnList;

    std::vector<SelectTrace> selects;  // execution order
    size_t scannerReads = 0;
};

struct ReplayInputs {
    DbTables tables;
    std::map<std::string, std::optional<std::vector<Integer>>> lists;
    std::vector<Integer> scanner;
    // Row orders to impose, consumed per executed SELECT in order; entries
    // that do not match the rows actually selected are ignored.
    std::vector<TestCase::RsOrdering> rsOrderings;
};
ReplayInputs inputs_of(const TestCase& tc);

// Optional hooks for the bounded search driver.
struct ReplayHooks {
    // Called before each decision is recorded; returning false aborts the
    // run (terminal RuntimeError with a "guide" detail).  Used to prune
    // executions that already left every path of interest.
    std::function<bool(const Decision&)> onDecision;
    // Hard cap on executed statements; 0 means the default (1e6).
    size_t stepLimit = 0;
    // Statement numbering to reuse across runs (as produced by
    // number_sites); when null each replay computes its own.
    const std::map<const Stmt*, int>* sites = nullptr;
};

// Executes the method concretely over an in-memory database with full
// integrity checking, scanner input, transaction snapshots and result-set
// cursors.  Never throws for program-level failures; those end up in the
// trace terminal.
Trace replay(const Schema& schema, const MethodAst& method,
             const ReplayInputs& inputs, const ReplayHooks& hooks = {});
Trace replay(const Schema& schema, const MethodAst& method, const TestCase& tc);

struct Conformance {
    bool conformant = false;
    std::string firstMismatch;
};

// Conformant iff the trace took exactly the path's decisions, ended in the
// terminal the path prescribes, and reproduced the test case's output
// tables, lists and return value.
Conformance check_conformance(const Trace& trace, const Path& path,
                              const TestCase& tc);

// One DML statement against explicit tables.  On violation the state is
// untouched and `violation` names the rule that fired ("pk", "fk", "ifk",
// "check").  Host-language subexpressions are evaluated via `host`.
struct WriteResult {
    bool ok = true;
    std::string violation;
};
using HostEval = std::function<Integer(const IntExpr&)>;
WriteResult apply_write(const Schema& schema, const DbWrite& w, DbTables& tables,
                        const HostEval& host);

}  // namespace relsy::oracle
