// End-to-end acceptance checks for the test-data generation toolchain.
// Each criterion prints exactly one PASS/FAIL line (details indented below
// it on failure); the process exits nonzero if any selected criterion fails.
// Criteria can be selected by number on the command line (default: all).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "relsy/cfg.hpp"
#include "relsy/oracle/brute.hpp"
#include "relsy/oracle/interp.hpp"
#include "relsy/parser.hpp"
#include "relsy/paths.hpp"
#include "relsy/smt/extract.hpp"
#include "relsy/smt/model.hpp"
#include "relsy/smt/render.hpp"
#include "relsy/smt/sexp.hpp"
#include "relsy/smt/solver.hpp"
#include "relsy/symexec/exec.hpp"
#include "relsy/testcase.hpp"
#include "relsy/validate.hpp"
#include "support/fixtures.hpp"
#include "support/ladder.hpp"

using namespace relsy;

namespace {

// ---------------------------------------------------------------------------
// Tolerances and budgets, fixed up front.
// ---------------------------------------------------------------------------
constexpr double kWorkedSolveBudgetMs = 5000.0;  // criterion 1: solver time
constexpr double kPathSweepBudgetMs = 600000.0;  // criterion 2: total wall
constexpr double kRuleSweepBudgetMs = 900000.0;  // criterion 4: total wall
constexpr int kMinTransactionCases = 200;        // criterion 5: sat cases
constexpr double kInfeasiblePerPathMs = 1000.0;  // criterion 6: per query
constexpr double kTimingNoise = 0.95;            // criterion 3: monotonicity slack
constexpr int kSolveTimeoutMs = 60000;           // default per-query timeout
constexpr int kLadderTimeoutMs = 300000;         // criterion 3 per-query timeout

double nowMs() {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

struct Criterion {
  std::vector<std::string> failures;
  std::string detail;
  bool ok() const { return failures.empty(); }
  void fail(const std::string& m) {
    if (failures.size() < 10)
      failures.push_back(m);
    else if (failures.size() == 10)
      failures.push_back("(further failures suppressed)");
  }
};

struct Prog {
  Schema schema;
  MethodAst method;
};

Prog parseProg(const std::string& schemaText, const std::string& methodText) {
  Prog p{parse_schema(schemaText), parse_method(methodText)};
  auto diags = validate(p.schema, p.method);
  if (!diags.empty()) throw std::runtime_error("fixture does not validate: " + diags[0].message);
  return p;
}

Path pathByLabel(const MethodAst& m, const std::string& label) {
  auto ds = parse_path_label(label);
  if (!ds) throw std::runtime_error("bad path label " + label);
  auto p = walk_decisions(build_cfg(m), *ds);
  if (!p) throw std::runtime_error("label " + label + " does not name a path");
  return *p;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Multiset of assertion bodies / set of declarations, canonically printed.
std::multiset<std::string> assertionMultiset(const std::string& script) {
  auto sexps = smt::parse_sexps(script);
  if (!sexps) throw std::runtime_error("unparsable script");
  std::multiset<std::string> out;
  for (const auto& s : *sexps)
    if (!s.atom && s.kids.size() == 2 && s.kids[0].atom && s.kids[0].text == "assert")
      out.insert(smt::sexp_to_string(s.kids[1]));
  return out;
}
std::set<std::string> declarationSet(const std::string& script) {
  auto sexps = smt::parse_sexps(script);
  if (!sexps) throw std::runtime_error("unparsable script");
  std::set<std::string> out;
  for (const auto& s : *sexps)
    if (s.atom || s.kids.empty() || !s.kids[0].atom || s.kids[0].text != "assert")
      out.insert(smt::sexp_to_string(s));
  return out;
}

std::string smtInt(const Integer& v) {
  if (v < 0) return "(- " + to_string(Integer(-v)) + ")";
  return to_string(v);
}

// Assertions pinning one input table to exactly the given tuple set.
std::string pinTable(const std::string& sort, const TableBinding& b, const TableRows& rows) {
  std::string out;
  std::vector<std::string> matches;
  for (const auto& row : rows) {
    std::string match;
    for (size_t i = 0; i < b.attrs.size(); ++i) {
      if (!match.empty()) match += " ";
      match += "(= (" + b.attrs[i].second + " r) " + smtInt(row[i]) + ")";
    }
    if (b.attrs.size() > 1) match = "(and " + match + ")";
    matches.push_back(match);
    out += "(assert (exists ((r " + sort + ")) (and (" + b.member + " r) " + match + ")))\n";
  }
  if (rows.empty()) {
    out += "(assert (forall ((r " + sort + ")) (not (" + b.member + " r))))\n";
  } else {
    std::string any = matches[0];
    if (matches.size() > 1) {
      any = "(or";
      for (const auto& m : matches) any += " " + m;
      any += ")";
    }
    out += "(assert (forall ((r " + sort + ")) (=> (" + b.member + " r) " + any + ")))\n";
  }
  return out;
}

std::string pinState(const Bindings& bindings, const DbTables& tables) {
  static const TableRows kEmpty;
  std::string out;
  for (const auto& [name, binding] : bindings.inputTables) {
    auto it = tables.find(name);
    out += pinTable(name, binding, it == tables.end() ? kEmpty : it->second);
  }
  return out;
}

// Evaluates host expressions made of literals and arithmetic only.
Integer litEval(const IntExpr& e) {
  switch (e.kind) {
    case IntExpr::Kind::Lit: return Integer(e.text);
    case IntExpr::Kind::Add: return litEval(*e.lhs) + litEval(*e.rhs);
    case IntExpr::Kind::Sub: return litEval(*e.lhs) - litEval(*e.rhs);
    default: throw std::runtime_error("non-literal host expression in fixture");
  }
}

// Extract + integrity-check + replay one sat outcome; returns "" or a failure.
std::string checkSatOutcome(const Prog& prog, const ExecResult& exec, const Path& path,
                            const std::string& label, const smt::SolveOutcome& outcome) {
  try {
    smt::Model model = smt::Model::parse(outcome.modelText);
    TestCase tc = extract_testcase(model, exec.bindings, label);
    auto badIn = validate_db(prog.schema, tc.inputTables);
    if (!badIn.empty()) return label + ": extracted input state breaks integrity: " + badIn[0];
    auto badOut = validate_db(prog.schema, tc.outputTables);
    if (!badOut.empty()) return label + ": extracted output state breaks integrity: " + badOut[0];
    oracle::Trace tr = oracle::replay(prog.schema, prog.method, tc);
    oracle::Conformance c = oracle::check_conformance(tr, path, tc);
    if (!c.conformant) return label + ": replay divergent: " + c.firstMismatch;
    return "";
  } catch (const std::exception& e) {
    return label + ": model extraction failed: " + e.what();
  }
}

std::string fmtMs(double ms) {
  char buf[64];
  if (ms >= 10000)
    std::snprintf(buf, sizeof buf, "%.1f s", ms / 1000.0);
  else
    std::snprintf(buf, sizeof buf, "%.0f ms", ms);
  return buf;
}

// ---------------------------------------------------------------------------
// Criterion 1: worked-example reproduction.
// ---------------------------------------------------------------------------
void criterion1(Criterion& c) {
  Prog prog = parseProg(fixtures::kLibrarySchema, fixtures::kAddBooksMethod);
  const std::string label = fixtures::kAddBooksWorkedPathLabel;
  Path path = pathByLabel(prog.method, label);
  ExecResult exec = exec_path(prog.schema, prog.method, path);
  std::string script = smt::render_script(exec.system, false);

  std::string golden = readFile(std::string(RELSY_TEST_DIR) + "/golden/worked_example.smt2");
  auto got = assertionMultiset(script);
  auto want = assertionMultiset(golden);
  if (got != want)
    c.fail("assertion set differs from the expected script (" + std::to_string(got.size()) +
           " emitted vs " + std::to_string(want.size()) + " expected, or bodies differ)");
  if (declarationSet(script) != declarationSet(golden))
    c.fail("declaration set differs from the expected script");

  smt::SolveOutcome outcome = smt::solve_script(script, kSolveTimeoutMs, true);
  if (outcome.status != smt::SolveStatus::Sat) {
    c.fail("expected sat on the worked path");
    return;
  }
  if (outcome.wallTimeMs > kWorkedSolveBudgetMs)
    c.fail("solve took " + fmtMs(outcome.wallTimeMs) + ", budget " + fmtMs(kWorkedSolveBudgetMs));
  std::string err = checkSatOutcome(prog, exec, path, label, outcome);
  if (!err.empty()) c.fail(err);
  c.detail = std::to_string(got.size()) + " assertions match; sat in " +
             fmtMs(outcome.wallTimeMs) + "; replay conformant";
}

// ---------------------------------------------------------------------------
// Criterion 2: full path sweep at K=1 with brute-force cross-validation.
// ---------------------------------------------------------------------------
void criterion2(Criterion& c) {
  double t0 = nowMs();
  Prog prog = parseProg(fixtures::kLibrarySchema, fixtures::kAddBooksMethod);
  auto paths = enumerate_paths_vec(build_cfg(prog.method), 1);

  struct Pending {
    size_t pathIdx;
    ExecResult exec;
  };
  std::vector<Pending> pending;
  std::vector<smt::BatchItem> items;
  std::vector<size_t> bruteTargets;  // indices into `paths`

  for (size_t i = 0; i < paths.size(); ++i) {
    try {
      ExecResult er = exec_path(prog.schema, prog.method, paths[i]);
      items.push_back({smt::render_script(er.system, false), true});
      pending.push_back({i, std::move(er)});
    } catch (const StaticallyInfeasiblePath&) {
      bruteTargets.push_back(i);
    }
  }

  int sat = 0;
  if (!items.empty()) {
    smt::BatchResult batch = smt::solve_batch(items, kSolveTimeoutMs);
    for (size_t j = 0; j < pending.size(); ++j) {
      const auto& out = batch.outcomes[j];
      const size_t pi = pending[j].pathIdx;
      const std::string label = path_label(paths[pi]);
      if (out.status == smt::SolveStatus::Sat) {
        ++sat;
        std::string err = checkSatOutcome(prog, pending[j].exec, paths[pi], label, out);
        if (!err.empty()) c.fail(err);
      } else if (out.status == smt::SolveStatus::Unsat) {
        bruteTargets.push_back(pi);
      } else {
        c.fail(label + ": verdict unknown (" + out.reason + ")");
      }
    }
  }

  std::vector<Path> targets;
  for (size_t pi : bruteTargets) targets.push_back(paths[pi]);
  oracle::Bounds bounds;
  bounds.maxRows = 2;
  bounds.valueMin = 0;
  bounds.valueMax = 6;
  bounds.maxListLen = 2;
  bounds.maxScanner = 2;
  oracle::BruteOutcome brute = oracle::brute_force_sweep(prog.schema, prog.method, targets, bounds);
  for (size_t t = 0; t < targets.size(); ++t)
    if (brute.witnesses[t].has_value())
      c.fail(path_label(targets[t]) +
             ": declared infeasible, but exhaustive search found a concrete witness");

  double wall = nowMs() - t0;
  if (wall > kPathSweepBudgetMs)
    c.fail("sweep took " + fmtMs(wall) + ", budget " + fmtMs(kPathSweepBudgetMs));
  std::ostringstream d;
  d << paths.size() << " paths: " << sat << " sat conformant, " << targets.size()
    << " infeasible confirmed empty by " << brute.runs << " bounded executions; " << fmtMs(wall);
  c.detail = d.str();
}

// ---------------------------------------------------------------------------
// Criterion 3: scalability ladder.
// ---------------------------------------------------------------------------
void criterion3(Criterion& c) {
  const int rounds[] = {1, 2, 4, 8};
  long long counts[4] = {0, 0, 0, 0};
  double times[4] = {0, 0, 0, 0};

  for (int idx = 0; idx < 4; ++idx) {
    int r = rounds[idx];
    Prog prog = parseProg(ladder::schema(), ladder::method(r));
    auto paths = enumerate_paths_vec(build_cfg(prog.method), 1);
    if (paths.size() != 1) {
      c.fail("ladder with " + std::to_string(r) + " rounds has " + std::to_string(paths.size()) +
             " paths, expected 1");
      return;
    }
    ExecResult exec = exec_path(prog.schema, prog.method, paths[0]);
    counts[idx] = static_cast<long long>(exec.system.assertionCount());
    std::string script = smt::render_script(exec.system, false);

    double samples[3];
    for (int s = 0; s < 3; ++s) {
      smt::SolveOutcome out = smt::solve_script(script, kLadderTimeoutMs, false);
      if (out.status != smt::SolveStatus::Sat) {
        c.fail("ladder with " + std::to_string(8 * r) + " statements did not solve sat");
        return;
      }
      samples[s] = out.wallTimeMs;
    }
    std::sort(samples, samples + 3);
    times[idx] = samples[1];  // median of three
  }

  // Exactly affine in statement count: the per-round increment never changes.
  long long d1 = counts[1] - counts[0];
  if (counts[2] - counts[1] != 2 * d1 || counts[3] - counts[2] != 4 * d1)
    c.fail("constraint counts " + std::to_string(counts[0]) + "," + std::to_string(counts[1]) +
           "," + std::to_string(counts[2]) + "," + std::to_string(counts[3]) +
           " do not fit an affine function of statement count exactly");

  // Monotone (within measurement noise) and superlinear growth.
  for (int i = 1; i < 4; ++i)
    if (times[i] < kTimingNoise * times[i - 1])
      c.fail("solve time shrank from " + fmtMs(times[i - 1]) + " to " + fmtMs(times[i]) +
             " between ladder sizes");
  if (!(times[3] > 2.0 * times[2]))
    c.fail("last size doubling scaled time by " +
           std::to_string(times[2] > 0 ? times[3] / times[2] : 0.0) + "x, expected more than 2x");
  if (!(times[3] > 8.0 * times[0]))
    c.fail("an 8x statement increase scaled time by " +
           std::to_string(times[0] > 0 ? times[3] / times[0] : 0.0) + "x, expected more than 8x");

  std::ostringstream d;
  d << "constraints " << counts[0] << "/" << counts[1] << "/" << counts[2] << "/" << counts[3]
    << " for 8/16/32/64 statements; median solve " << fmtMs(times[0]) << "/" << fmtMs(times[1])
    << "/" << fmtMs(times[2]) << "/" << fmtMs(times[3]);
  c.detail = d.str();
}

// ---------------------------------------------------------------------------
// Criterion 4: integrity-rule oracle equivalence.
// ---------------------------------------------------------------------------

const char* kPlainTable = R"sql(
CREATE TABLE t (
  x INTEGER NOT NULL,
  CONSTRAINT pk_t PRIMARY KEY (x)
);
)sql";

const char* kCheckedTable = R"sql(
CREATE TABLE t (
  x INTEGER NOT NULL,
  CONSTRAINT pk_t PRIMARY KEY (x),
  CHECK (x > 0)
);
)sql";

const char* kParentChild = R"sql(
CREATE TABLE p (
  a INTEGER NOT NULL,
  CONSTRAINT pk_p PRIMARY KEY (a)
);
CREATE TABLE c (
  r INTEGER NOT NULL,
  CONSTRAINT pk_c PRIMARY KEY (r),
  CONSTRAINT fk_c FOREIGN KEY (r) REFERENCES p (a)
);
)sql";

std::string tryWrap(const std::string& sql) {
  return "void f(Connection con, Scanner in) throws SQLException {\n  try {\n"
         "    con.createStatement().execute(\"" + sql + "\");\n"
         "  } catch (SQLException e) {\n  }\n}\n";
}

// All subsets of [-3,3] with at most 3 elements (bitmask order, ascending values).
std::vector<std::vector<int>> smallSubsets() {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << 7); ++mask) {
    if (__builtin_popcount(mask) > 3) continue;
    std::vector<int> s;
    for (int b = 0; b < 7; ++b)
      if (mask & (1 << b)) s.push_back(b - 3);
    out.push_back(std::move(s));
  }
  return out;
}

TableRows rowsOf(const std::vector<int>& vals) {
  TableRows rows;
  for (int v : vals) rows.insert({Integer(v)});
  return rows;
}

std::vector<DbTables> singleTableStates(bool positiveOnly) {
  std::vector<DbTables> out;
  for (const auto& s : smallSubsets()) {
    if (positiveOnly && !s.empty() && s.front() <= 0) continue;  // sorted ascending
    out.push_back({{"t", rowsOf(s)}});
  }
  return out;
}

std::vector<DbTables> parentChildStates() {
  std::vector<DbTables> out;
  for (const auto& p : smallSubsets()) {
    // Children are subsets of the parent keys (the child's pk is its fk).
    int k = static_cast<int>(p.size());
    for (int mask = 0; mask < (1 << k); ++mask) {
      std::vector<int> cvals;
      for (int b = 0; b < k; ++b)
        if (mask & (1 << b)) cvals.push_back(p[b]);
      out.push_back({{"p", rowsOf(p)}, {"c", rowsOf(cvals)}});
    }
  }
  return out;
}

std::string describeState(const DbTables& state) {
  std::ostringstream ds;
  for (const auto& [name, rows] : state) {
    ds << name << "{";
    bool first = true;
    for (const auto& row : rows) {
      ds << (first ? "" : ",") << row[0];
      first = false;
    }
    ds << "} ";
  }
  return ds.str();
}

struct RuleSweep {
  std::string name;
  std::string schemaText;
  std::vector<std::string> writes;  // SQL, one per write parameterisation
  std::vector<DbTables> states;     // every valid state within the bounds
  std::set<std::string> expectClasses;
};

void criterion4(Criterion& c) {
  double t0 = nowMs();
  const std::vector<int> vals = {-3, -2, -1, 0, 1, 2, 3};

  std::vector<RuleSweep> sweeps;
  {
    RuleSweep s{"INSERT/pk", kPlainTable, {}, singleTableStates(false), {"pk"}};
    for (int w : vals) s.writes.push_back("INSERT INTO t VALUES (" + std::to_string(w) + ")");
    sweeps.push_back(std::move(s));
  }
  {
    RuleSweep s{"INSERT/check", kCheckedTable, {}, singleTableStates(true), {"pk", "check"}};
    for (int w : vals) s.writes.push_back("INSERT INTO t VALUES (" + std::to_string(w) + ")");
    sweeps.push_back(std::move(s));
  }
  {
    RuleSweep s{"INSERT/fk", kParentChild, {}, parentChildStates(), {"pk", "fk"}};
    for (int w : vals) s.writes.push_back("INSERT INTO c VALUES (" + std::to_string(w) + ")");
    sweeps.push_back(std::move(s));
  }
  {
    RuleSweep s{"UPDATE/pk", kPlainTable, {}, singleTableStates(false), {"pk"}};
    for (int w : vals)
      for (int sel : {0, 4})
        s.writes.push_back("UPDATE t SET x = " + std::to_string(w) + " WHERE x < " +
                           std::to_string(sel));
    sweeps.push_back(std::move(s));
  }
  {
    RuleSweep s{"UPDATE/check", kCheckedTable, {}, singleTableStates(true), {"pk", "check"}};
    for (int w : vals)
      for (int sel : {2, 4})
        s.writes.push_back("UPDATE t SET x = " + std::to_string(w) + " WHERE x < " +
                           std::to_string(sel));
    sweeps.push_back(std::move(s));
  }
  {
    RuleSweep s{"UPDATE/inverse-fk", kParentChild, {}, parentChildStates(), {"pk", "ifk"}};
    for (int w : vals)
      for (int sel : {0, 4})
        s.writes.push_back("UPDATE p SET a = " + std::to_string(w) + " WHERE a < " +
                           std::to_string(sel));
    sweeps.push_back(std::move(s));
  }
  {
    RuleSweep s{"UPDATE/fk", kParentChild, {}, parentChildStates(), {"pk", "fk"}};
    for (int w : vals)
      for (int sel : {0, 4})
        s.writes.push_back("UPDATE c SET r = " + std::to_string(w) + " WHERE r < " +
                           std::to_string(sel));
    sweeps.push_back(std::move(s));
  }
  {
    RuleSweep s{"DELETE/inverse-fk", kParentChild, {}, parentChildStates(), {"ifk"}};
    for (int sel : vals)
      s.writes.push_back("DELETE FROM p WHERE a < " + std::to_string(sel));
    sweeps.push_back(std::move(s));
  }
  // Deleting from an unreferenced table: the failure branch must be ruled out
  // statically and the write must succeed concretely on every state.
  {
    RuleSweep s{"DELETE/unreferenced", kParentChild, {}, parentChildStates(), {}};
    for (int sel : {1, 4}) s.writes.push_back("DELETE FROM c WHERE r < " + std::to_string(sel));
    sweeps.push_back(std::move(s));
  }

  long long solves = 0, stateWrites = 0;
  int staticFailureBranches = 0;

  struct Meta {
    const RuleSweep* sweep;
    std::string desc;
    bool expectSat;
    bool successBranch;
  };
  std::vector<smt::BatchItem> items;
  std::vector<Meta> metas;
  std::vector<std::pair<size_t, size_t>> pairIdx;  // (success item, failure item)
  auto flush = [&](Criterion& cc) {
    if (items.empty()) return;
    smt::BatchResult batch = smt::solve_batch(items, 30000);
    for (size_t i = 0; i < items.size(); ++i) {
      const auto& out = batch.outcomes[i];
      const Meta& m = metas[i];
      bool isSat = out.status == smt::SolveStatus::Sat;
      if (out.status == smt::SolveStatus::Unknown)
        cc.fail(m.sweep->name + ": " + m.desc + ": solver returned unknown");
      else if (isSat != m.expectSat)
        cc.fail(m.sweep->name + ": " + m.desc + ": " +
                (m.successBranch ? "success" : "failure") + " branch is " +
                (isSat ? "satisfiable" : "unsatisfiable") + " but the concrete write " +
                (m.expectSat == m.successBranch ? "succeeds" : "violates"));
    }
    for (const auto& [si, fi] : pairIdx)
      if (batch.outcomes[si].status == smt::SolveStatus::Sat &&
          batch.outcomes[fi].status == smt::SolveStatus::Sat)
        cc.fail(metas[si].sweep->name + ": " + metas[si].desc +
                ": success and failure branches both satisfiable");
    solves += static_cast<long long>(items.size());
    items.clear();
    metas.clear();
    pairIdx.clear();
  };

  for (const auto& sweep : sweeps) {
    Schema schema = parse_schema(sweep.schemaText);
    std::set<std::string> seenClasses;
    for (const auto& sql : sweep.writes) {
      Prog prog{schema, parse_method(tryWrap(sql))};
      auto diags = validate(prog.schema, prog.method);
      if (!diags.empty()) {
        c.fail(sweep.name + ": fixture does not validate: " + diags[0].message);
        continue;
      }
      const DbWrite& write = *prog.method.body[0]->write;

      ExecResult success = exec_path(prog.schema, prog.method, pathByLabel(prog.method, "c0n"));
      std::optional<ExecResult> failure;
      try {
        failure = exec_path(prog.schema, prog.method, pathByLabel(prog.method, "c0y"));
      } catch (const StaticallyInfeasiblePath&) {
        ++staticFailureBranches;
      }
      std::string successScript = smt::render_script(success.system, false);
      std::string failureScript = failure ? smt::render_script(failure->system, false) : "";

      for (const auto& state : sweep.states) {
        ++stateWrites;
        DbTables scratch = state;
        oracle::WriteResult res = oracle::apply_write(prog.schema, write, scratch, litEval);
        if (!res.ok) seenClasses.insert(res.violation);
        std::string desc = sql + " on " + describeState(state);

        items.push_back({successScript + pinState(success.bindings, state), false});
        metas.push_back({&sweep, desc, res.ok, true});
        if (failure) {
          items.push_back({failureScript + pinState(failure->bindings, state), false});
          metas.push_back({&sweep, desc, !res.ok, false});
          pairIdx.push_back({items.size() - 2, items.size() - 1});
        } else if (!res.ok) {
          c.fail(sweep.name + ": " + desc +
                 ": failure branch is statically infeasible but the concrete write violates " +
                 res.violation);
        }
        if (items.size() >= 600) flush(c);
      }
    }
    flush(c);
    for (const auto& want : sweep.expectClasses)
      if (!seenClasses.count(want))
        c.fail(sweep.name + ": no state/write pair exercised the " + want + " rule");
  }

  double wall = nowMs() - t0;
  if (wall > kRuleSweepBudgetMs)
    c.fail("sweep took " + fmtMs(wall) + ", budget " + fmtMs(kRuleSweepBudgetMs));
  std::ostringstream d;
  d << sweeps.size() << " write/rule sweeps, " << stateWrites << " state-write pairs, " << solves
    << " solver queries (" << staticFailureBranches
    << " failure branches statically infeasible); " << fmtMs(wall);
  c.detail = d.str();
}

// ---------------------------------------------------------------------------
// Criterion 5: transaction semantics on random write/commit/rollback mixes.
// ---------------------------------------------------------------------------
void criterion5(Criterion& c) {
  std::mt19937 rng(20260815u);
  std::uniform_int_distribution<int> val(-3, 3);
  std::uniform_int_distribution<int> sel(-3, 4);
  std::uniform_int_distribution<int> len(1, 8);
  std::discrete_distribution<int> kind({30, 20, 15, 10, 10, 8, 7});

  auto randomBody = [&]() {
    int n = len(rng);
    std::string body;
    for (int i = 0; i < n; ++i) {
      switch (kind(rng)) {
        case 0:
          body += "  con.createStatement().execute(\"INSERT INTO p VALUES (" +
                  std::to_string(val(rng)) + ")\");\n";
          break;
        case 1:
          body += "  con.createStatement().execute(\"INSERT INTO c VALUES (" +
                  std::to_string(val(rng)) + ")\");\n";
          break;
        case 2:
          body += "  con.createStatement().execute(\"UPDATE p SET a = " +
                  std::to_string(val(rng)) + " WHERE a < " + std::to_string(sel(rng)) + "\");\n";
          break;
        case 3:
          body += "  con.createStatement().execute(\"DELETE FROM p WHERE a < " +
                  std::to_string(sel(rng)) + "\");\n";
          break;
        case 4:
          body += "  con.createStatement().execute(\"DELETE FROM c WHERE r < " +
                  std::to_string(sel(rng)) + "\");\n";
          break;
        case 5: body += "  con.commit();\n"; break;
        default: body += "  con.rollback();\n"; break;
      }
    }
    return "void f(Connection con, Scanner in) throws SQLException {\n" + body + "}\n";
  };

  Schema schema = parse_schema(kParentChild);
  int satCases = 0, generated = 0, unsatCases = 0;
  const int kMaxCandidates = 1000;

  while (satCases < kMinTransactionCases && generated < kMaxCandidates) {
    struct Cand {
      Prog prog;
      Path path;
      ExecResult exec;
    };
    std::vector<Cand> cands;
    std::vector<smt::BatchItem> items;
    for (int i = 0; i < 50 && generated < kMaxCandidates; ++i, ++generated) {
      Prog prog{schema, parse_method(randomBody())};
      auto paths = enumerate_paths_vec(build_cfg(prog.method), 1);
      if (paths.size() != 1) {
        c.fail("a random sequence unexpectedly branched");
        return;
      }
      ExecResult er = exec_path(prog.schema, prog.method, paths[0]);
      items.push_back({smt::render_script(er.system, false), true});
      cands.push_back({std::move(prog), std::move(paths[0]), std::move(er)});
    }
    smt::BatchResult batch = smt::solve_batch(items, kSolveTimeoutMs);
    for (size_t i = 0; i < cands.size(); ++i) {
      const auto& out = batch.outcomes[i];
      if (out.status == smt::SolveStatus::Unsat) {
        ++unsatCases;
        continue;
      }
      if (out.status != smt::SolveStatus::Sat) {
        c.fail("a random sequence got verdict unknown (" + out.reason + ")");
        continue;
      }
      ++satCases;
      std::string err =
          checkSatOutcome(cands[i].prog, cands[i].exec, cands[i].path, "straight", out);
      if (!err.empty()) c.fail(err);
    }
  }

  if (satCases < kMinTransactionCases)
    c.fail("only " + std::to_string(satCases) + " of the required " +
           std::to_string(kMinTransactionCases) + " satisfiable sequences were found in " +
           std::to_string(generated) + " candidates");
  std::ostringstream d;
  d << satCases << " model-bearing sequences agree with the concrete interpreter (" << generated
    << " generated, " << unsatCases << " unsatisfiable)";
  c.detail = d.str();
}

// ---------------------------------------------------------------------------
// Criterion 6: contradictory paths resolve quickly.
// ---------------------------------------------------------------------------
void criterion6(Criterion& c) {
  auto wrapS = [](const std::string& body) {
    return "void f(Connection con, Scanner in) throws SQLException {\n" + body + "\n}\n";
  };
  auto wrapL = [](const std::string& body) {
    return "void f(Connection con, Scanner in, List<Integer> l) throws SQLException {\n" + body +
           "\n}\n";
  };
  const std::string kCheckAbove2 = R"sql(
CREATE TABLE t (
  x INTEGER NOT NULL,
  CONSTRAINT pk_t PRIMARY KEY (x),
  CHECK (x > 2)
);
)sql";

  struct Case {
    std::string name;
    std::string schemaText;
    std::string methodText;
    std::string label;
  };
  std::vector<Case> cases = {
      {"nested sign contradiction", kPlainTable,
       wrapS("int x = in.nextInt(); if (0 < x) { if (x < 0) { x = 0; } }"), "i0t.i1t"},
      {"conjunction of opposites", kPlainTable,
       wrapS("int a = in.nextInt(); if ((a < 0) & (0 < a)) { a = 1; }"), "i0t"},
      {"constant equality else-branch", kPlainTable,
       wrapS("int x = 3; if (x == 3) { x = 4; } else { x = 5; }"), "i0f"},
      {"two readers ordered both ways", kPlainTable,
       wrapS("int a = in.nextInt(); int b = in.nextInt(); if (a < b) { if (b < a) { a = 0; } }"),
       "i0t.i1t"},
      {"loop entry against guard", kPlainTable,
       wrapS("int x = in.nextInt(); if (0 < x) { while (x < 0) { x = x - 1; } }"), "i0t.w1e.w1x"},
      {"duplicate key inserts", kPlainTable,
       wrapS("con.createStatement().execute(\"INSERT INTO t VALUES (5)\");\n"
             "  con.createStatement().execute(\"INSERT INTO t VALUES (5)\");"),
       "straight"},
      {"insert twice, success branch", kPlainTable,
       wrapS("con.createStatement().execute(\"INSERT INTO t VALUES (5)\");\n"
             "  try { con.createStatement().execute(\"INSERT INTO t VALUES (5)\"); } catch "
             "(SQLException e) { }"),
       "c0n"},
      {"delete failure with nothing referencing", kPlainTable,
       wrapS("try { con.createStatement().execute(\"DELETE FROM t WHERE x < 3\"); } catch "
             "(SQLException e) { }"),
       "c0y"},
      {"insert below check bound, success branch", kCheckAbove2,
       wrapS("try { con.createStatement().execute(\"INSERT INTO t VALUES (1)\"); } catch "
             "(SQLException e) { }"),
       "c0n"},
      {"update into check violation", kCheckAbove2,
       wrapS("con.createStatement().execute(\"INSERT INTO t VALUES (5)\");\n"
             "  con.createStatement().execute(\"UPDATE t SET x = 1 WHERE x = 5\");"),
       "straight"},
      {"assert of the branch guard", kPlainTable,
       wrapS("int x = in.nextInt(); if (0 < x) { assert (0 < x); }"), "i0t.a1v"},
      {"assert of a constant truth", kPlainTable, wrapS("assert (0 < 1);"), "a0v"},
      {"query filtered by an impossible check", kCheckAbove2,
       wrapS("ResultSet rs = con.createStatement().executeQuery(\"SELECT x FROM t WHERE x = "
             "1\"); if (rs.next()) { int z = rs.getInt(\"x\"); }"),
       "i0t"},
      {"freshly inserted row not found", kPlainTable,
       wrapS("con.createStatement().execute(\"INSERT INTO t VALUES (4)\");\n"
             "  ResultSet rs = con.createStatement().executeQuery(\"SELECT x FROM t WHERE x = "
             "4\"); if (!rs.next()) { int z = 0; }"),
       "i0t"},
      {"self-inequality", kPlainTable, wrapS("int a = in.nextInt(); if (!(a == a)) { a = 1; }"),
       "i0t"},
      {"nonnegative then negative", kPlainTable,
       wrapS("int a = in.nextInt(); if ((0 < a) | (a == 0)) { if (a < 0) { a = 1; } }"),
       "i0t.i1t"},
      {"null and not null", kPlainTable,
       wrapL("if (l == null) { if (!(l == null)) { int z = 0; } }"), "i0t.i1t"},
      {"negative list size", kPlainTable,
       wrapL("if (!(l == null)) { if (l.size() < 0) { int z = 0; } }"), "i0t.i1t"},
      {"loop exits too early", kPlainTable, wrapS("int i = 0; while (i < 3) { i = i + 1; }"),
       "w0e.w0x"},
      {"unreferenced two-table delete failure", kParentChild,
       wrapS("try { con.createStatement().execute(\"DELETE FROM c WHERE r < 5\"); } catch "
             "(SQLException e) { }"),
       "c0y"},
  };

  int staticCount = 0, solvedCount = 0;
  double worst = 0.0;
  for (const auto& k : cases) {
    Prog prog = parseProg(k.schemaText, k.methodText);
    Path path = pathByLabel(prog.method, k.label);
    double e0 = nowMs();
    std::optional<ExecResult> exec;
    try {
      exec = exec_path(prog.schema, prog.method, path);
    } catch (const StaticallyInfeasiblePath&) {
      double t = nowMs() - e0;
      worst = std::max(worst, t);
      if (t > kInfeasiblePerPathMs) c.fail(k.name + ": static detection took " + fmtMs(t));
      ++staticCount;
      continue;
    }
    smt::SolveOutcome out =
        smt::solve_script(smt::render_script(exec->system, false), kSolveTimeoutMs, false);
    worst = std::max(worst, out.wallTimeMs);
    if (out.status != smt::SolveStatus::Unsat)
      c.fail(k.name + ": expected unsat, solver said " +
             (out.status == smt::SolveStatus::Sat ? "sat" : "unknown"));
    else if (out.wallTimeMs > kInfeasiblePerPathMs)
      c.fail(k.name + ": solved in " + fmtMs(out.wallTimeMs) + ", budget " +
             fmtMs(kInfeasiblePerPathMs));
    ++solvedCount;
  }
  std::ostringstream d;
  d << cases.size() << " contradictory paths (" << solvedCount << " unsat, " << staticCount
    << " statically infeasible), worst " << fmtMs(worst);
  c.detail = d.str();
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> picked;
  for (int i = 1; i < argc; ++i) picked.insert(std::atoi(argv[i]));

  struct Entry {
    int id;
    const char* name;
    void (*run)(Criterion&);
  };
  const Entry entries[] = {
      {1, "worked example reproduction", criterion1},
      {2, "exhaustive path sweep at K=1", criterion2},
      {3, "scalability ladder", criterion3},
      {4, "integrity-rule oracle equivalence", criterion4},
      {5, "transaction semantics", criterion5},
      {6, "infeasibility detection speed", criterion6},
  };

  bool allPass = true;
  for (const auto& e : entries) {
    if (!picked.empty() && !picked.count(e.id)) continue;
    Criterion c;
    double t0 = nowMs();
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      c.fail(std::string("exception: ") + ex.what());
    }
    double wall = nowMs() - t0;
    std::printf("criterion %d (%s): %s - %s [%s]\n", e.id, e.name, c.ok() ? "PASS" : "FAIL",
                c.detail.empty() ? (c.ok() ? "ok" : "see below") : c.detail.c_str(),
                fmtMs(wall).c_str());
    for (const auto& f : c.failures) std::printf("    - %s\n", f.c_str());
    std::fflush(stdout);
    if (!c.ok()) allPass = false;
  }
  return allPass ? 0 : 1;
}
