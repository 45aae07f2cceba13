#include "relsy/oracle/brute.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <tuple>

#include "relsy/cfg.hpp"
#include "relsy/oracle/interp.hpp"

namespace relsy::oracle {

namespace {

using Row = std::vector<Integer>;
using RowMatrix = std::vector<Row>;
using Lists = std::map<std::string, std::optional<std::vector<Integer>>>;

bool cmp_holds(const Integer& lhs, CmpOp op, const Integer& rhs) {
    switch (op) {
        case CmpOp::Lt: return lhs < rhs;
        case CmpOp::Eq: return lhs == rhs;
        case CmpOp::Gt: return lhs > rhs;
    }
    return false;
}

// Prefix tree over the targets' decision sequences: a run is cut short the
// moment its decisions leave every target.
struct TrieNode {
    std::map<std::tuple<int, int, bool>, std::unique_ptr<TrieNode>> kids;
    std::vector<size_t> endsHere;  // targets whose decision lists end here
};

std::tuple<int, int, bool> trieKey(const Decision& d) {
    return {static_cast<int>(d.kind), d.siteId, d.flag};
}

bool terminal_matches(TerminalKind want, Terminal got) {
    if (want == TerminalKind::AssertViolation) return got == Terminal::AssertViolation;
    return got == Terminal::Completed;
}

class Search {
public:
    Search(const Schema& schema, const MethodAst& method,
           const std::vector<Path>& targets, const Bounds& b)
        : schema_(schema), method_(method), targets_(targets), b_(b),
          sites_(number_sites(method)) {
        for (long long v = b.valueMin; v <= b.valueMax; ++v) values_.push_back(Integer(v));
        outcome_.witnesses.resize(targets.size());

        root_ = std::make_unique<TrieNode>();
        for (size_t i = 0; i < targets_.size(); ++i) {
            TrieNode* cur = root_.get();
            for (const auto& d : targets_[i].decisions) {
                auto& kid = cur->kids[trieKey(d)];
                if (!kid) kid = std::make_unique<TrieNode>();
                cur = kid.get();
            }
            cur->endsHere.push_back(i);
        }
    }

    BruteOutcome run() {
        if (!targets_.empty()) {
            DbTables db;
            enumTables(0, db);
        }
        return std::move(outcome_);
    }

private:
    bool done() const { return found_ == targets_.size(); }

    size_t tableIndex(const std::string& name) const {
        for (size_t i = 0; i < schema_.tables.size(); ++i)
            if (schema_.tables[i].name == name) return i;
        return schema_.tables.size();
    }

    // ---- database states ------------------------------------------------

    // All rows the table may hold: per-attribute values inside the bounds,
    // narrowed by checks, and by the chosen keys of already-built parents.
    std::vector<Row> candidateRows(size_t ti, const TableDef& t, const DbTables& db) {
        std::vector<std::vector<Integer>> per(t.attrs.size());
        for (size_t i = 0; i < t.attrs.size(); ++i) {
            const std::string& a = t.attrs[i];
            std::vector<Integer> vals = values_;
            if (const ForeignKey* fk = t.fkOn(a)) {
                if (fk->refTable != t.name && tableIndex(fk->refTable) < ti) {
                    const TableDef& p = *schema_.table(fk->refTable);
                    std::set<Integer> pks;
                    for (const auto& r : db.at(fk->refTable))
                        pks.insert(r[(size_t)p.pkPos() - 1]);
                    std::vector<Integer> keep;
                    for (const auto& v : vals)
                        if (pks.count(v)) keep.push_back(v);
                    vals = std::move(keep);
                }
                // Self references and references to later tables are
                // validated once the involved contents exist.
            }
            for (const auto& chk : t.checks) {
                if (chk.attr != a) continue;
                std::vector<Integer> keep;
                for (const auto& v : vals)
                    if (cmp_holds(v, chk.op, Integer(chk.bound))) keep.push_back(v);
                vals = std::move(keep);
            }
            per[i] = std::move(vals);
        }
        std::vector<Row> out;
        Row cur(t.attrs.size());
        cross(per, 0, cur, out);
        return out;
    }

    static void cross(const std::vector<std::vector<Integer>>& per, size_t i, Row& cur,
                      std::vector<Row>& out) {
        if (i == per.size()) {
            out.push_back(cur);
            return;
        }
        for (const auto& v : per[i]) {
            cur[i] = v;
            cross(per, i + 1, cur, out);
        }
    }

    static bool pkTaken(const TableDef& t, const TableRows& rows, const Row& r) {
        size_t pk = (size_t)t.pkPos() - 1;
        for (const auto& x : rows)
            if (x[pk] == r[pk]) return true;
        return false;
    }

    bool selfFksOk(const TableDef& t, const TableRows& rows) const {
        for (const auto& fk : t.fks) {
            if (fk.refTable != t.name) continue;
            size_t pk = (size_t)t.pkPos() - 1;
            size_t at = (size_t)t.attrPos(fk.attr) - 1;
            for (const auto& r : rows) {
                bool found = false;
                for (const auto& x : rows)
                    if (x[pk] == r[at]) { found = true; break; }
                if (!found) return false;
            }
        }
        return true;
    }

    // References into tables built later in declaration order (cycles).
    bool lateFksOk(const DbTables& db) const {
        for (size_t ti = 0; ti < schema_.tables.size(); ++ti) {
            const TableDef& t = schema_.tables[ti];
            for (const auto& fk : t.fks) {
                if (fk.refTable == t.name || tableIndex(fk.refTable) < ti) continue;
                const TableDef& p = *schema_.table(fk.refTable);
                size_t at = (size_t)t.attrPos(fk.attr) - 1;
                size_t pk = (size_t)p.pkPos() - 1;
                for (const auto& r : db.at(t.name)) {
                    bool found = false;
                    for (const auto& x : db.at(fk.refTable))
                        if (x[pk] == r[at]) { found = true; break; }
                    if (!found) return false;
                }
            }
        }
        return true;
    }

    void enumTables(size_t ti, DbTables& db) {
        if (done()) return;
        if (ti == schema_.tables.size()) {
            if (!lateFksOk(db)) return;
            Lists lists;
            enumLists(0, db, lists);
            return;
        }
        const TableDef& t = schema_.tables[ti];
        std::vector<Row> cand = candidateRows(ti, t, db);
        db[t.name] = {};
        chooseRows(ti, t, cand, 0, db);
        db.erase(t.name);
    }

    // Every subset of the candidates (up to maxRows, distinct keys) exactly
    // once, in index order.
    void chooseRows(size_t ti, const TableDef& t, const std::vector<Row>& cand,
                    size_t start, DbTables& db) {
        if (done()) return;
        if (selfFksOk(t, db[t.name])) enumTables(ti + 1, db);
        if ((int)db[t.name].size() >= b_.maxRows) return;
        for (size_t i = start; i < cand.size(); ++i) {
            if (pkTaken(t, db[t.name], cand[i])) continue;
            db[t.name].insert(cand[i]);
            chooseRows(ti, t, cand, i + 1, db);
            db[t.name].erase(cand[i]);
            if (done()) return;
        }
    }

    // ---- list arguments ---------------------------------------------------

    void enumLists(size_t pi, const DbTables& db, Lists& lists) {
        if (done()) return;
        if (pi == method_.listParams.size()) {
            seed(db, lists);
            return;
        }
        const std::string& p = method_.listParams[pi];
        lists[p] = std::nullopt;
        enumLists(pi + 1, db, lists);
        std::vector<Integer> v;
        enumListValues(pi, db, lists, p, v);
        lists.erase(p);
    }

    void enumListValues(size_t pi, const DbTables& db, Lists& lists,
                        const std::string& p, std::vector<Integer>& v) {
        if (done()) return;
        lists[p] = v;
        enumLists(pi + 1, db, lists);
        if ((int)v.size() >= b_.maxListLen) return;
        for (const auto& val : values_) {
            v.push_back(val);
            enumListValues(pi, db, lists, p, v);
            v.pop_back();
            if (done()) return;
        }
    }

    // ---- runs: scanner values and row orders grow on demand ---------------

    struct Config {
        std::vector<Integer> scanner;
        std::vector<TestCase::RsOrdering> orderings;
    };

    static std::string cfgKey(const Config& c) {
        std::ostringstream out;
        for (const auto& v : c.scanner) out << v << ',';
        out << '#';
        for (const auto& o : c.orderings) {
            for (const auto& r : o.rows) {
                for (const auto& v : r) out << v << ',';
                out << ';';
            }
            out << '|';
        }
        return out.str();
    }

    void seed(const DbTables& db, const Lists& lists) {
        std::deque<Config> queue;
        std::set<std::string> seen;
        queue.push_back({});
        seen.insert(cfgKey(queue.front()));

        ReplayInputs in;
        in.tables = db;
        in.lists = lists;

        while (!queue.empty() && !done()) {
            Config cfg = std::move(queue.front());
            queue.pop_front();
            if (++outcome_.runs > b_.maxRuns)
                throw SearchSpaceTooLarge(
                    "exhaustive search exceeded its budget of " +
                    std::to_string(b_.maxRuns) + " executions");

            in.scanner = cfg.scanner;
            in.rsOrderings = cfg.orderings;

            const TrieNode* cur = root_.get();
            bool off = false;
            ReplayHooks hooks;
            hooks.sites = &sites_;
            hooks.onDecision = [&](const Decision& d) {
                auto it = cur->kids.find(trieKey(d));
                if (it == cur->kids.end()) {
                    off = true;
                    return false;
                }
                cur = it->second.get();
                return true;
            };

            Trace tr = replay(schema_, method_, in, hooks);

            if (!off) {
                for (size_t idx : cur->endsHere) {
                    if (outcome_.witnesses[idx]) continue;
                    if (!terminal_matches(targets_[idx].terminal, tr.terminal)) continue;
                    outcome_.witnesses[idx] = makeWitness(targets_[idx], db, lists, cfg, tr);
                    ++found_;
                }
            }
            fork(cfg, tr, off, queue, seen);
        }
    }

    void push(Config&& c, std::deque<Config>& queue, std::set<std::string>& seen) {
        std::string key = cfgKey(c);
        if (seen.insert(std::move(key)).second) queue.push_back(std::move(c));
    }

    void fork(const Config& cfg, const Trace& tr, bool off, std::deque<Config>& queue,
              std::set<std::string>& seen) {
        if (!off && tr.terminal == Terminal::ScannerExhausted &&
            (int)cfg.scanner.size() < b_.maxScanner) {
            // Feed the read that failed; row orders are revisited by the
            // extended runs, which see at least as much of the method.
            for (const auto& v : values_) {
                Config next = cfg;
                next.scanner.push_back(v);
                push(std::move(next), queue, seen);
            }
            return;
        }
        // Re-run with every other row order of the first select that had a
        // choice; deeper selects fork from those runs in turn.
        for (size_t q = cfg.orderings.size(); q < tr.selects.size(); ++q) {
            if (tr.selects[q].rows.size() < 2) continue;
            Config base = cfg;
            for (size_t j = cfg.orderings.size(); j < q; ++j)
                base.orderings.push_back(
                    {tr.selects[j].rs, tr.selects[j].table, tr.selects[j].rows});
            RowMatrix perm = tr.selects[q].rows;
            std::sort(perm.begin(), perm.end());
            do {
                if (perm == tr.selects[q].rows) continue;
                Config next = base;
                next.orderings.push_back({tr.selects[q].rs, tr.selects[q].table, perm});
                push(std::move(next), queue, seen);
            } while (std::next_permutation(perm.begin(), perm.end()));
            break;
        }
    }

    TestCase makeWitness(const Path& target, const DbTables& db, const Lists& lists,
                         const Config& cfg, const Trace& tr) const {
        TestCase tc;
        tc.pathLabel = path_label(target);
        tc.inputTables = db;
        tc.inputLists = lists;
        tc.scanner.assign(cfg.scanner.begin(), cfg.scanner.begin() + (long)tr.scannerReads);
        tc.outputTables = tr.finalTables;
        tc.outputLists = tr.finalLists;
        tc.hasReturn = tr.hasReturn;
        tc.returnIsList = tr.returnIsList;
        tc.returnInt = tr.returnInt;
        tc.returnList = tr.returnList;
        for (const auto& s : tr.selects) tc.rsOrderings.push_back({s.rs, s.table, s.rows});
        return tc;
    }

    const Schema& schema_;
    const MethodAst& method_;
    const std::vector<Path>& targets_;
    const Bounds& b_;
    std::map<const Stmt*, int> sites_;
    std::vector<Integer> values_;
    std::unique_ptr<TrieNode> root_;
    BruteOutcome outcome_;
    size_t found_ = 0;
};

}  // namespace

BruteOutcome brute_force_sweep(const Schema& schema, const MethodAst& method,
                               const std::vector<Path>& targets, const Bounds& bounds) {
    return Search(schema, method, targets, bounds).run();
}

std::optional<TestCase> brute_force_path(const Schema& schema, const MethodAst& method,
                                         const Path& path, const Bounds& bounds) {
    std::vector<Path> one{path};
    return Search(schema, method, one, bounds).run().witnesses[0];
}

}  // namespace relsy::oracle
