#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relsy/ast.hpp"
#include "relsy/testcase.hpp"

namespace relsy {

inline constexpr int kSuiteFormatVersion = 1;

// One enumerated path's outcome.  `error` isolates per-path failures: the
// rest of the suite is still meaningful when a single path misbehaves.
struct PathReport {
    std::string label;
    std::string verdict;  // sat | unsat | unknown | statically-infeasible
    double wallTimeMs = 0.0;
    int constraintCount = 0;              // assertions in the emitted script
    std::optional<TestCase> testcase;     // present when sat
    std::optional<std::string> replay;    // "conformant" or "divergent: ..."
    std::optional<std::string> error;     // why a verdict could not be reached
};

struct SuiteReport {
    int formatVersion = kSuiteFormatVersion;
    int k = 3;
    std::string schemaText;
    std::string methodText;
    std::vector<PathReport> paths;  // enumeration order; every path exactly once

    int feasible() const;    // sat
    int infeasible() const;  // unsat + statically-infeasible
    int unknown() const;     // everything else

    // True when every sat path extracted a test case that replayed
    // conformant and no path erred; the gen command's exit status.
    bool clean() const;
};

nlohmann::json suite_to_json(const SuiteReport& s);
SuiteReport suite_from_json(const nlohmann::json& j);

struct GenOptions {
    int k = 3;
    long long timeoutMs = 60000;
    int jobs = 1;  // >1 solves paths concurrently; output order is unaffected
};

// The whole pipeline for one schema/method pair: enumerate paths, build and
// solve each path's constraints, extract test cases, and replay-check them.
SuiteReport generate_suite(const Schema& schema, const MethodAst& method,
                           const std::string& schemaText, const std::string& methodText,
                           const GenOptions& opts);

}  // namespace relsy
