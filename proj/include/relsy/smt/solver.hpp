#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace relsy::smt {

// Raised when the solver executable cannot be started at all.
struct SolverSpawnError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when the solver ran but its output could not be interpreted
// (missing status line, error diagnostics, truncated batch, ...).
struct SolverProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SolveStatus { Sat, Unsat, Unknown };

struct SolveOutcome {
    SolveStatus status = SolveStatus::Unknown;
    // Raw model text as printed by the solver (Sat with model requested only).
    std::string modelText;
    // For Unknown: whatever hint is available (e.g. "timeout").
    std::string reason;
    // Time attributed to this query, in milliseconds.  For a single-script
    // solve this is the solver-reported evaluation time when available;
    // within a batch the batch total is split evenly across items.
    double wallTimeMs = 0.0;
};

struct BatchItem {
    // Declarations + assertions only; the driver appends (check-sat),
    // (get-model) and the separators itself.
    std::string script;
    bool wantModel = true;
};

struct BatchResult {
    std::vector<SolveOutcome> outcomes;
    // Wall-clock time for the whole solver process, including startup.
    double processWallMs = 0.0;
    // Time spent inside the solver evaluating the batch, when reported.
    double solverMs = 0.0;
};

// Resolve the solver command line: the RELSY_SOLVER environment variable
// (split on whitespace) wins; otherwise the build-time default; otherwise
// plain "z3".  The returned vector is argv[0..]; query flags are appended
// by the driver.
std::vector<std::string> solver_command();

// Run a batch of independent queries through one solver process, separated
// by (reset).  timeoutMs is the per-query soft timeout (0 = none); queries
// that exceed it come back Unknown.  hardTimeoutMs (0 = derive from the
// soft timeout and batch size) kills the whole process from outside.
BatchResult solve_batch(const std::vector<BatchItem>& items, int timeoutMs,
                        long long hardTimeoutMs = 0);

// Convenience wrapper for a single script.
SolveOutcome solve_script(const std::string& script, int timeoutMs,
                          bool wantModel = true);

}  // namespace relsy::smt
