#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "relsy/ast.hpp"
#include "relsy/paths.hpp"
#include "relsy/testcase.hpp"

namespace relsy::oracle {

// Limits for the exhaustive concrete search.  The search covers every valid
// database within the row/value bounds, every list argument up to the given
// length (including null), and grows scanner input and result-set row orders
// on demand, so a "nothing found" answer is a proof of infeasibility within
// these bounds.
struct Bounds {
    int maxRows = 2;            // per table
    long long valueMin = 0;     // smallest attribute / list / scanner value
    long long valueMax = 6;     // largest
    int maxListLen = 2;
    int maxScanner = 2;         // scanner values that may be consumed
    // Executions allowed before the search gives up.
    unsigned long long maxRuns = 200000000ULL;
};

struct SearchSpaceTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BruteOutcome {
    // Parallel to the targets: a concrete test case whose replay follows the
    // target exactly, or nothing if no input within bounds does.
    std::vector<std::optional<TestCase>> witnesses;
    unsigned long long runs = 0;  // executions performed
};

// Replays the method over every input in bounds, pruning executions as soon
// as their decisions leave the common prefix tree of the targets.  Stops
// early once every target has a witness.
BruteOutcome brute_force_sweep(const Schema& schema, const MethodAst& method,
                               const std::vector<Path>& targets, const Bounds& bounds);

std::optional<TestCase> brute_force_path(const Schema& schema, const MethodAst& method,
                                         const Path& path, const Bounds& bounds);

}  // namespace relsy::oracle
