#include "relsy/suite.hpp"

#include <atomic>
#include <thread>

#include "relsy/cfg.hpp"
#include "relsy/oracle/interp.hpp"
#include "relsy/paths.hpp"
#include "relsy/smt/extract.hpp"
#include "relsy/smt/model.hpp"
#include "relsy/smt/render.hpp"
#include "relsy/smt/solver.hpp"
#include "relsy/symexec/exec.hpp"

namespace relsy {

int SuiteReport::feasible() const {
    int n = 0;
    for (const auto& p : paths) n += p.verdict == "sat";
    return n;
}

int SuiteReport::infeasible() const {
    int n = 0;
    for (const auto& p : paths)
        n += p.verdict == "unsat" || p.verdict == "statically-infeasible";
    return n;
}

int SuiteReport::unknown() const {
    return (int)paths.size() - feasible() - infeasible();
}

bool SuiteReport::clean() const {
    for (const auto& p : paths) {
        if (p.error) return false;
        if (p.verdict == "sat" && (!p.replay || *p.replay != "conformant")) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

nlohmann::json suite_to_json(const SuiteReport& s) {
    nlohmann::json j;
    j["formatVersion"] = s.formatVersion;
    j["k"] = s.k;
    j["schema"] = s.schemaText;
    j["method"] = s.methodText;
    j["paths"] = nlohmann::json::array();
    for (const auto& p : s.paths) {
        nlohmann::json e;
        e["label"] = p.label;
        e["verdict"] = p.verdict;
        e["wallTimeMs"] = p.wallTimeMs;
        e["constraintCount"] = p.constraintCount;
        if (p.testcase) e["testcase"] = testcase_to_json(*p.testcase);
        if (p.replay) e["replay"] = *p.replay;
        if (p.error) e["error"] = *p.error;
        j["paths"].push_back(std::move(e));
    }
    j["summary"] = {{"feasible", s.feasible()},
                    {"infeasible", s.infeasible()},
                    {"unknown", s.unknown()}};
    return j;
}

SuiteReport suite_from_json(const nlohmann::json& j) {
    SuiteReport s;
    s.formatVersion = j.at("formatVersion").get<int>();
    s.k = j.at("k").get<int>();
    s.schemaText = j.at("schema").get<std::string>();
    s.methodText = j.at("method").get<std::string>();
    for (const auto& e : j.at("paths")) {
        PathReport p;
        p.label = e.at("label").get<std::string>();
        p.verdict = e.at("verdict").get<std::string>();
        p.wallTimeMs = e.at("wallTimeMs").get<double>();
        p.constraintCount = e.at("constraintCount").get<int>();
        if (e.contains("testcase")) p.testcase = testcase_from_json(e.at("testcase"));
        if (e.contains("replay")) p.replay = e.at("replay").get<std::string>();
        if (e.contains("error")) p.error = e.at("error").get<std::string>();
        s.paths.push_back(std::move(p));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

namespace {

const char* statusName(smt::SolveStatus s) {
    switch (s) {
        case smt::SolveStatus::Sat: return "sat";
        case smt::SolveStatus::Unsat: return "unsat";
        case smt::SolveStatus::Unknown: return "unknown";
    }
    return "unknown";
}

struct Prepared {
    Path path;
    std::optional<ExecResult> exec;  // absent when statically infeasible / errored
    std::string script;
};

// Fills verdict/testcase/replay for one solved path.
void finishPath(const Schema& schema, const MethodAst& method, const Prepared& prep,
                const smt::SolveOutcome& solved, PathReport& report) {
    report.verdict = statusName(solved.status);
    report.wallTimeMs = solved.wallTimeMs;
    if (solved.status == smt::SolveStatus::Unknown && !solved.reason.empty())
        report.error = solved.reason;
    if (solved.status != smt::SolveStatus::Sat) return;

    smt::Model model = smt::Model::parse(solved.modelText);
    TestCase tc = extract_testcase(model, prep.exec->bindings, report.label);

    auto inBad = validate_db(schema, tc.inputTables);
    auto outBad = validate_db(schema, tc.outputTables);
    if (!inBad.empty() || !outBad.empty()) {
        report.testcase = std::move(tc);
        report.replay = "divergent: extracted database breaks integrity: " +
                        (inBad.empty() ? outBad.front() : inBad.front());
        return;
    }
    oracle::Trace trace = oracle::replay(schema, method, tc);
    oracle::Conformance c = oracle::check_conformance(trace, prep.path, tc);
    report.testcase = std::move(tc);
    report.replay = c.conformant ? "conformant" : "divergent: " + c.firstMismatch;
}

}  // namespace

SuiteReport generate_suite(const Schema& schema, const MethodAst& method,
                           const std::string& schemaText, const std::string& methodText,
                           const GenOptions& opts) {
    SuiteReport suite;
    suite.k = opts.k;
    suite.schemaText = schemaText;
    suite.methodText = methodText;

    Cfg cfg = build_cfg(method);
    std::vector<Path> paths = enumerate_paths_vec(cfg, opts.k);

    suite.paths.resize(paths.size());
    std::vector<Prepared> prepared(paths.size());
    std::vector<size_t> pending;  // indices that need the solver

    for (size_t i = 0; i < paths.size(); ++i) {
        PathReport& r = suite.paths[i];
        r.label = path_label(paths[i]);
        prepared[i].path = paths[i];
        try {
            ExecResult exec = exec_path(schema, method, paths[i]);
            prepared[i].script = smt::render_script(exec.system, /*checkSat=*/false);
            r.constraintCount = exec.system.assertionCount();
            prepared[i].exec = std::move(exec);
            pending.push_back(i);
        } catch (const StaticallyInfeasiblePath&) {
            r.verdict = "statically-infeasible";
        } catch (const std::exception& e) {
            r.verdict = "unknown";
            r.error = e.what();
        }
    }

    int jobs = opts.jobs > 1 ? opts.jobs : 1;
    if (jobs == 1) {
        // One solver process for the whole suite; fall back to one process
        // per path if anything in the shared session goes wrong.
        std::vector<smt::BatchItem> items;
        for (size_t i : pending) items.push_back({prepared[i].script, true});
        bool batched = false;
        if (!items.empty()) {
            std::optional<smt::BatchResult> res;
            try {
                res = smt::solve_batch(items, opts.timeoutMs);
            } catch (const smt::SolverSpawnError&) {
                throw;  // no solver at all: nothing path-specific to isolate
            } catch (const std::exception&) {
                res.reset();
            }
            if (res) {
                for (size_t k = 0; k < pending.size(); ++k) {
                    size_t i = pending[k];
                    try {
                        finishPath(schema, method, prepared[i], res->outcomes[k],
                                   suite.paths[i]);
                    } catch (const std::exception& e) {
                        suite.paths[i].verdict = "unknown";
                        suite.paths[i].error = e.what();
                    }
                }
                batched = true;
            }
        }
        if (!batched) {
            for (size_t i : pending) {
                try {
                    smt::SolveOutcome one =
                        smt::solve_script(prepared[i].script, opts.timeoutMs);
                    finishPath(schema, method, prepared[i], one, suite.paths[i]);
                } catch (const std::exception& e) {
                    suite.paths[i].verdict = "unknown";
                    suite.paths[i].error = e.what();
                }
            }
        }
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                size_t k = next.fetch_add(1);
                if (k >= pending.size()) return;
                size_t i = pending[k];
                try {
                    smt::SolveOutcome one =
                        smt::solve_script(prepared[i].script, opts.timeoutMs);
                    finishPath(schema, method, prepared[i], one, suite.paths[i]);
                } catch (const std::exception& e) {
                    suite.paths[i].verdict = "unknown";
                    suite.paths[i].error = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return suite;
}

}  // namespace relsy
