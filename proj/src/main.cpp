#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "relsy/cfg.hpp"
#include "relsy/diagnostics.hpp"
#include "relsy/oracle/interp.hpp"
#include "relsy/parser.hpp"
#include "relsy/paths.hpp"
#include "relsy/smt/render.hpp"
#include "relsy/suite.hpp"
#include "relsy/symexec/exec.hpp"
#include "relsy/validate.hpp"

using namespace relsy;

namespace {

std::optional<std::string> readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool writeOut(const std::string& outFile, const std::string& content) {
    if (outFile.empty()) {
        std::cout << content;
        return true;
    }
    std::ofstream out(outFile, std::ios::binary);
    if (!out) {
        std::cerr << "relsy: cannot write " << outFile << "\n";
        return false;
    }
    out << content;
    return true;
}

struct Frontend {
    Schema schema;
    MethodAst method;
    std::string schemaText, methodText;
};

std::optional<Frontend> loadFrontend(const std::string& schemaFile,
                                     const std::string& methodFile) {
    auto st = readFile(schemaFile);
    if (!st) {
        std::cerr << "relsy: cannot read " << schemaFile << "\n";
        return std::nullopt;
    }
    auto mt = readFile(methodFile);
    if (!mt) {
        std::cerr << "relsy: cannot read " << methodFile << "\n";
        return std::nullopt;
    }
    Frontend f;
    f.schemaText = *st;
    f.methodText = *mt;
    try {
        f.schema = parse_schema(f.schemaText);
    } catch (const ParseError& e) {
        std::cerr << format_diag(schemaFile, e.loc(), e.what()) << "\n";
        return std::nullopt;
    }
    try {
        f.method = parse_method(f.methodText);
    } catch (const ParseError& e) {
        std::cerr << format_diag(methodFile, e.loc(), e.what()) << "\n";
        return std::nullopt;
    }
    std::vector<Diagnostic> diags = validate(f.schema, f.method);
    if (!diags.empty()) {
        for (const auto& d : diags)
            std::cerr << format_diag(methodFile, d.loc, d.message) << "\n";
        return std::nullopt;
    }
    return f;
}

int cmdGen(const std::string& schemaFile, const std::string& methodFile,
           const GenOptions& opts, const std::string& outFile) {
    auto f = loadFrontend(schemaFile, methodFile);
    if (!f) return 2;
    SuiteReport suite;
    try {
        suite = generate_suite(f->schema, f->method, f->schemaText, f->methodText, opts);
    } catch (const std::exception& e) {
        std::cerr << "relsy: " << e.what() << "\n";
        return 1;
    }
    if (!writeOut(outFile, suite_to_json(suite).dump(2) + "\n")) return 1;
    std::cerr << "paths: " << suite.paths.size() << " (" << suite.feasible()
              << " feasible, " << suite.infeasible() << " infeasible, "
              << suite.unknown() << " unknown)\n";
    if (!suite.clean()) {
        std::cerr << "relsy: suite is not clean (errors or non-conformant replays)\n";
        return 1;
    }
    return 0;
}

int cmdEmit(const std::string& schemaFile, const std::string& methodFile,
            const std::string& label, const std::string& outFile) {
    auto f = loadFrontend(schemaFile, methodFile);
    if (!f) return 2;
    auto decisions = parse_path_label(label);
    if (!decisions) {
        std::cerr << "relsy: unknown path label '" << label << "'\n";
        return 2;
    }
    Cfg cfg = build_cfg(f->method);
    auto path = walk_decisions(cfg, *decisions);
    if (!path) {
        std::cerr << "relsy: label '" << label
                  << "' does not name a path of this method\n";
        return 2;
    }
    try {
        ExecResult exec = exec_path(f->schema, f->method, *path);
        return writeOut(outFile, smt::render_script(exec.system, /*checkSat=*/true))
                   ? 0
                   : 1;
    } catch (const StaticallyInfeasiblePath& e) {
        std::cerr << "relsy: path " << label << " is statically infeasible: "
                  << e.what() << "\n";
        return 1;
    }
}

int cmdPaths(const std::string& schemaFile, const std::string& methodFile, int k) {
    auto f = loadFrontend(schemaFile, methodFile);
    if (!f) return 2;
    Cfg cfg = build_cfg(f->method);
    enumerate_paths(cfg, k, [](const Path& p) { std::cout << path_label(p) << "\n"; });
    return 0;
}

int cmdReplay(const std::string& suiteFile) {
    auto text = readFile(suiteFile);
    if (!text) {
        std::cerr << "relsy: cannot read " << suiteFile << "\n";
        return 2;
    }
    SuiteReport suite;
    try {
        suite = suite_from_json(nlohmann::json::parse(*text));
    } catch (const std::exception& e) {
        std::cerr << "relsy: " << suiteFile << " is not a valid suite: " << e.what()
                  << "\n";
        return 2;
    }
    if (suite.formatVersion != kSuiteFormatVersion) {
        std::cerr << "relsy: unsupported suite formatVersion " << suite.formatVersion
                  << "\n";
        return 2;
    }
    Schema schema;
    MethodAst method;
    try {
        schema = parse_schema(suite.schemaText);
        method = parse_method(suite.methodText);
    } catch (const ParseError& e) {
        std::cerr << "relsy: embedded sources do not parse: " << e.what() << "\n";
        return 2;
    }
    Cfg cfg = build_cfg(method);
    int replayed = 0;
    for (const auto& p : suite.paths) {
        if (!p.testcase) continue;
        auto decisions = parse_path_label(p.label);
        std::optional<Path> path;
        if (decisions) path = walk_decisions(cfg, *decisions);
        if (!path) {
            std::cout << p.label << ": divergent: label does not name a path of the method\n";
            return 1;
        }
        oracle::Trace trace = oracle::replay(schema, method, *p.testcase);
        oracle::Conformance c = oracle::check_conformance(trace, *path, *p.testcase);
        if (!c.conformant) {
            std::cout << p.label << ": divergent: " << c.firstMismatch << "\n";
            return 1;
        }
        ++replayed;
    }
    std::cout << replayed << " test case(s) replayed conformant\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relsy: test-data generation for database-manipulating methods"};
    app.require_subcommand(1);

    std::string schemaFile, methodFile, outFile, label, suiteFile;
    GenOptions opts;

    CLI::App* gen = app.add_subcommand(
        "gen", "enumerate paths, solve their constraints, emit a JSON test suite");
    gen->add_option("--schema", schemaFile, "schema definition (SQL DDL)")->required();
    gen->add_option("--method", methodFile, "method source")->required();
    gen->add_option("--k", opts.k, "max consecutive iterations per loop (default 3)");
    gen->add_option("--timeout-ms", opts.timeoutMs,
                    "per-path solver timeout in milliseconds (default 60000)");
    gen->add_option("--jobs", opts.jobs, "solver processes to run in parallel");
    gen->add_option("--out", outFile, "output file (default: stdout)");

    CLI::App* emit = app.add_subcommand("emit", "print one path's SMT-LIB script");
    emit->add_option("--schema", schemaFile, "schema definition (SQL DDL)")->required();
    emit->add_option("--method", methodFile, "method source")->required();
    emit->add_option("--path", label, "path label, as printed by 'paths'")->required();
    emit->add_option("--out", outFile, "output file (default: stdout)");

    CLI::App* paths = app.add_subcommand("paths", "list path labels up to the loop bound");
    paths->add_option("--schema", schemaFile, "schema definition (SQL DDL)")->required();
    paths->add_option("--method", methodFile, "method source")->required();
    paths->add_option("--k", opts.k, "max consecutive iterations per loop (default 3)");

    CLI::App* replay = app.add_subcommand(
        "replay", "re-run every test case of a suite and check conformance");
    replay->add_option("suite", suiteFile, "suite JSON produced by 'gen'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc ? 2 : 0;
    }

    if (gen->parsed()) return cmdGen(schemaFile, methodFile, opts, outFile);
    if (emit->parsed()) return cmdEmit(schemaFile, methodFile, label, outFile);
    if (paths->parsed()) return cmdPaths(schemaFile, methodFile, opts.k);
    if (replay->parsed()) return cmdReplay(suiteFile);
    return 2;
}
