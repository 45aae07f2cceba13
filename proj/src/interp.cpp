#include "relsy/oracle/interp.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <sstream>

#include "relsy/cfg.hpp"

namespace relsy::oracle {

namespace {

// Expression-level failures (null dereference, bad index, cursor misuse)
// unwind to the statement loop via this exception; they are rare enough that
// throwing costs nothing measurable.
struct ExprAbort {
    Terminal terminal;
    std::string detail;
};

bool cmp_holds(const Integer& lhs, CmpOp op, const Integer& rhs) {
    switch (op) {
        case CmpOp::Lt: return lhs < rhs;
        case CmpOp::Eq: return lhs == rhs;
        case CmpOp::Gt: return lhs > rhs;
    }
    return false;
}

Integer eval_db_int(const TableDef& t, const std::vector<Integer>& row,
                    const DbIntExpr& e, const HostEval& host) {
    switch (e.kind) {
        case DbIntExpr::Kind::Lit: return Integer(e.text);
        case DbIntExpr::Kind::Attr: return row[(size_t)t.attrPos(e.text) - 1];
        case DbIntExpr::Kind::Add:
            return eval_db_int(t, row, *e.lhs, host) + eval_db_int(t, row, *e.rhs, host);
        case DbIntExpr::Kind::Sub:
            return eval_db_int(t, row, *e.lhs, host) - eval_db_int(t, row, *e.rhs, host);
        case DbIntExpr::Kind::Host: return host(*e.host);
    }
    return 0;
}

bool eval_db_cond(const TableDef& t, const std::vector<Integer>& row,
                  const DbCond* c, const HostEval& host) {
    if (!c) return true;  // absent WHERE matches every row
    switch (c->kind) {
        case DbCond::Kind::Cmp:
            return cmp_holds(row[(size_t)t.attrPos(c->attr) - 1], c->op,
                             eval_db_int(t, row, *c->rhs, host));
        case DbCond::Kind::And:
            return eval_db_cond(t, row, c->c1.get(), host) &
                   eval_db_cond(t, row, c->c2.get(), host);
        case DbCond::Kind::Or:
            return eval_db_cond(t, row, c->c1.get(), host) |
                   eval_db_cond(t, row, c->c2.get(), host);
        case DbCond::Kind::Not: return !eval_db_cond(t, row, c->c1.get(), host);
    }
    return false;
}

std::string decision_token(const Decision& d) {
    std::ostringstream out;
    switch (d.kind) {
        case Decision::Kind::IfBranch: out << 'i' << d.siteId << (d.flag ? 't' : 'f'); break;
        case Decision::Kind::LoopEnter: out << 'w' << d.siteId << 'e'; break;
        case Decision::Kind::LoopExit: out << 'w' << d.siteId << 'x'; break;
        case Decision::Kind::AssertOutcome: out << 'a' << d.siteId << (d.flag ? 'v' : 'p'); break;
        case Decision::Kind::CatchTaken: out << 'c' << d.siteId << (d.flag ? 'y' : 'n'); break;
    }
    return out.str();
}

std::string lower(std::string s) {
    for (char& c : s) c = (char)std::tolower((unsigned char)c);
    return s;
}

}  // namespace

const char* terminal_name(Terminal t) {
    switch (t) {
        case Terminal::Completed: return "completed";
        case Terminal::AssertViolation: return "assert-violation";
        case Terminal::UncaughtSqlViolation: return "uncaught-sql-violation";
        case Terminal::ScannerExhausted: return "scanner-exhausted";
        case Terminal::RuntimeError: return "runtime-error";
    }
    return "?";
}

ReplayInputs inputs_of(const TestCase& tc) {
    ReplayInputs in;
    in.tables = tc.inputTables;
    in.lists = tc.inputLists;
    in.scanner = tc.scanner;
    in.rsOrderings = tc.rsOrderings;
    return in;
}

// ---------------------------------------------------------------------------
// Write semantics
// ---------------------------------------------------------------------------

namespace {

WriteResult apply_insert(const Schema& schema, const TableDef& t,
                         const DbWrite& w, DbTables& tables, const HostEval& host) {
    std::vector<Integer> row;
    row.reserve(w.insertValues.size());
    for (const auto& e : w.insertValues) row.push_back(host(*e));

    const Integer& pk = row[(size_t)t.pkPos() - 1];
    for (const auto& r : tables[t.name])
        if (r[(size_t)t.pkPos() - 1] == pk) return {false, "pk"};
    for (const auto& fk : t.fks) {
        const Integer& v = row[(size_t)t.attrPos(fk.attr) - 1];
        const TableDef& parent = *schema.table(fk.refTable);
        bool found = false;
        for (const auto& r : tables[fk.refTable])
            if (r[(size_t)parent.attrPos(fk.refAttr) - 1] == v) { found = true; break; }
        if (!found) return {false, "fk"};
    }
    for (const auto& chk : t.checks)
        if (!cmp_holds(row[(size_t)t.attrPos(chk.attr) - 1], chk.op, Integer(chk.bound)))
            return {false, "check"};

    tables[t.name].insert(std::move(row));
    return {};
}

WriteResult apply_update(const Schema& schema, const TableDef& t,
                         const DbWrite& w, DbTables& tables, const HostEval& host) {
    size_t setPos = (size_t)t.attrPos(w.setAttr) - 1;
    const TableRows& rows = tables[t.name];

    // Evaluate WHERE and the new value per row up front; a violating
    // statement must leave the state untouched.
    std::vector<const std::vector<Integer>*> all;
    std::vector<char> hit;
    std::vector<Integer> newVal;
    for (const auto& r : rows) {
        all.push_back(&r);
        bool h = eval_db_cond(t, r, w.where.get(), host);
        hit.push_back((char)h);
        newVal.push_back(h ? eval_db_int(t, r, *w.setExpr, host) : Integer(0));
    }

    bool setsPk = (w.setAttr == t.pk);
    if (setsPk) {
        // Duplicate keys after the update: two updated rows colliding, or an
        // updated row landing on an untouched row's key.
        for (size_t a = 0; a < all.size(); ++a)
            for (size_t b = 0; b < all.size(); ++b) {
                if (a == b) continue;
                if (hit[a] && hit[b] && newVal[a] == newVal[b]) return {false, "pk"};
                if (!hit[a] && hit[b] &&
                    (*all[a])[(size_t)t.pkPos() - 1] == newVal[b])
                    return {false, "pk"};
            }
        // NO ACTION on incoming references: a row may not change its key
        // away from a value some child row still references.
        for (const auto& ifk : schema.incomingFks(t.name)) {
            const TableDef& child = *schema.table(ifk.fromTable);
            size_t refPos = (size_t)child.attrPos(ifk.attr) - 1;
            for (size_t a = 0; a < all.size(); ++a) {
                if (!hit[a]) continue;
                const Integer& oldPk = (*all[a])[(size_t)t.pkPos() - 1];
                if (oldPk == newVal[a]) continue;  // value unchanged: no break
                for (const auto& c : tables[ifk.fromTable])
                    if (c[refPos] == oldPk) return {false, "ifk"};
            }
        }
    }
    if (const ForeignKey* fk = t.fkOn(w.setAttr)) {
        const TableDef& parent = *schema.table(fk->refTable);
        size_t refPos = (size_t)parent.attrPos(fk->refAttr) - 1;
        for (size_t a = 0; a < all.size(); ++a) {
            if (!hit[a]) continue;
            bool found = false;
            for (const auto& p : tables[fk->refTable])
                if (p[refPos] == newVal[a]) { found = true; break; }
            if (!found) return {false, "fk"};
        }
    }
    for (const auto& chk : t.checks) {
        if (chk.attr != w.setAttr) continue;
        for (size_t a = 0; a < all.size(); ++a)
            if (hit[a] && !cmp_holds(newVal[a], chk.op, Integer(chk.bound)))
                return {false, "check"};
    }

    TableRows updated;
    for (size_t a = 0; a < all.size(); ++a) {
        std::vector<Integer> r = *all[a];
        if (hit[a]) r[setPos] = newVal[a];
        updated.insert(std::move(r));
    }
    tables[t.name] = std::move(updated);
    return {};
}

WriteResult apply_delete(const Schema& schema, const TableDef& t,
                         const DbWrite& w, DbTables& tables, const HostEval& host) {
    const TableRows& rows = tables[t.name];
    std::vector<const std::vector<Integer>*> doomed;
    for (const auto& r : rows)
        if (eval_db_cond(t, r, w.where.get(), host)) doomed.push_back(&r);

    // NO ACTION: any reference to a deleted key blocks the whole statement,
    // even a reference from a row that would itself be deleted.
    for (const auto& ifk : schema.incomingFks(t.name)) {
        const TableDef& child = *schema.table(ifk.fromTable);
        size_t refPos = (size_t)child.attrPos(ifk.attr) - 1;
        for (const auto& c : tables[ifk.fromTable])
            for (const auto* d : doomed)
                if (c[refPos] == (*d)[(size_t)t.pkPos() - 1]) return {false, "ifk"};
    }

    TableRows kept;
    for (const auto& r : rows) {
        bool dead = false;
        for (const auto* d : doomed)
            if (&r == d) { dead = true; break; }
        if (!dead) kept.insert(r);
    }
    tables[t.name] = std::move(kept);
    return {};
}

}  // namespace

WriteResult apply_write(const Schema& schema, const DbWrite& w, DbTables& tables,
                        const HostEval& host) {
    const TableDef& t = *schema.table(w.table);
    switch (w.kind) {
        case DbWrite::Kind::Insert: return apply_insert(schema, t, w, tables, host);
        case DbWrite::Kind::Update: return apply_update(schema, t, w, tables, host);
        case DbWrite::Kind::Delete: return apply_delete(schema, t, w, tables, host);
    }
    return {};
}

// ---------------------------------------------------------------------------
// The interpreter
// ---------------------------------------------------------------------------

namespace {

struct RsState {
    std::string table;
    std::vector<std::vector<Integer>> rows;
    long long cursor = -1;
};

class Interp {
public:
    Interp(const Schema& schema, const MethodAst& method, const ReplayInputs& in,
           const ReplayHooks& hooks)
        : schema_(schema), method_(method), in_(in), hooks_(hooks) {
        if (hooks.sites) {
            sites_ = hooks.sites;
        } else {
            ownSites_ = number_sites(method);
            sites_ = &ownSites_;
        }
        stepLimit_ = hooks.stepLimit ? hooks.stepLimit : 1000000;
    }

    Trace run() {
        for (const auto& t : schema_.tables) {
            auto it = in_.tables.find(t.name);
            tables_[t.name] = it == in_.tables.end() ? TableRows{} : it->second;
        }
        for (const auto& p : method_.listParams) {
            auto it = in_.lists.find(p);
            if (it == in_.lists.end() || !it->second) lists_[p] = nullptr;
            else lists_[p] = std::make_shared<std::vector<Integer>>(*it->second);
        }
        snapshot_ = tables_;

        Flow flow;
        try {
            flow = execBlock(method_.body);
        } catch (const ExprAbort& a) {
            trace_.terminal = a.terminal;
            trace_.detail = a.detail;
            flow = Flow::Aborted;
        }
        if (flow == Flow::Aborted) {
            // Any abnormal end discards the open transaction, like an
            // exception leaving the method before the final commit.
            tables_ = snapshot_;
        }
        trace_.finalTables = tables_;
        for (const auto& p : method_.listParams) {
            auto obj = lists_.at(p);
            if (!obj) trace_.finalLists[p] = std::nullopt;
            else trace_.finalLists[p] = *obj;
        }
        if (flow == Flow::Returned && returnStmt_ && !returnStmt_->var.empty()) {
            if (method_.returnType == ReturnType::Int) {
                trace_.hasReturn = true;
                trace_.returnInt = ints_.at(returnStmt_->var);
            } else if (method_.returnType == ReturnType::IntList) {
                trace_.hasReturn = true;
                trace_.returnIsList = true;
                auto obj = lists_.at(returnStmt_->var);
                if (obj) trace_.returnList = *obj;
            }
        }
        return std::move(trace_);
    }

private:
    enum class Flow { Continue, Returned, Aborted };

    Flow abort(Terminal t, std::string detail) {
        trace_.terminal = t;
        trace_.detail = std::move(detail);
        return Flow::Aborted;
    }

    bool decision(const Stmt& site, Decision::Kind kind, bool flag) {
        Decision d{kind, sites_->at(&site), flag};
        if (hooks_.onDecision && !hooks_.onDecision(d)) {
            pruned_ = true;
            return false;
        }
        trace_.decisions.push_back(d);
        return true;
    }

    std::shared_ptr<std::vector<Integer>> listRef(const std::string& var) {
        return lists_.at(var);
    }

    Integer hostInt(const IntExpr& e) {
        switch (e.kind) {
            case IntExpr::Kind::Lit: return Integer(e.text);
            case IntExpr::Kind::Var: return ints_.at(e.text);
            case IntExpr::Kind::Add: return hostInt(*e.lhs) + hostInt(*e.rhs);
            case IntExpr::Kind::Sub: return hostInt(*e.lhs) - hostInt(*e.rhs);
            case IntExpr::Kind::ListGet: {
                auto obj = listRef(e.text);
                if (!obj) throw ExprAbort{Terminal::RuntimeError, e.text + " is null"};
                Integer idx = hostInt(*e.lhs);
                if (idx < 0 || idx >= (long long)obj->size())
                    throw ExprAbort{Terminal::RuntimeError,
                                    e.text + ".get(" + to_string(idx) + ") out of range"};
                return (*obj)[(size_t)*to_int64(idx)];
            }
            case IntExpr::Kind::ListSize: {
                auto obj = listRef(e.text);
                if (!obj) throw ExprAbort{Terminal::RuntimeError, e.text + " is null"};
                return Integer((long long)obj->size());
            }
            case IntExpr::Kind::RsGetInt: {
                RsState& rs = rs_.at(e.text);
                if (rs.cursor < 0 || rs.cursor >= (long long)rs.rows.size())
                    throw ExprAbort{Terminal::RuntimeError,
                                    e.text + ".getInt without a current row"};
                const TableDef& t = *schema_.table(rs.table);
                return rs.rows[(size_t)rs.cursor][(size_t)t.attrPos(e.attr) - 1];
            }
        }
        return 0;
    }

    bool rsNext(const std::string& var) {
        RsState& rs = rs_.at(var);
        ++rs.cursor;
        return rs.cursor < (long long)rs.rows.size();
    }

    // The core language's & and | evaluate both operands (like Java's
    // non-short-circuit operators), so result-set cursors and null checks
    // fire exactly as written.
    bool cond(const Cond& c) {
        switch (c.kind) {
            case Cond::Kind::BoolLit: return c.value;
            case Cond::Kind::Not: return !cond(*c.lhs);
            case Cond::Kind::And: {
                bool l = cond(*c.lhs), r = cond(*c.rhs);
                return l & r;
            }
            case Cond::Kind::Or: {
                bool l = cond(*c.lhs), r = cond(*c.rhs);
                return l | r;
            }
            case Cond::Kind::Cmp:
                return cmp_holds(hostInt(*c.e1), c.op, hostInt(*c.e2));
            case Cond::Kind::IsNull: return listRef(c.var) == nullptr;
            case Cond::Kind::RsNext: return rsNext(c.var);
        }
        return false;
    }

    HostEval hostFn() {
        return [this](const IntExpr& e) { return hostInt(e); };
    }

    Flow execBlock(const Block& b) {
        for (const auto& s : b) {
            Flow f = execStmt(*s);
            if (f != Flow::Continue) return f;
        }
        return Flow::Continue;
    }

    Flow execStmt(const Stmt& s) {
        if (++steps_ > stepLimit_)
            return abort(Terminal::RuntimeError, "statement budget exhausted");
        switch (s.kind) {
            case Stmt::Kind::IntAssign:
                ints_[s.var] = hostInt(*s.intExpr);
                return Flow::Continue;
            case Stmt::Kind::ListAssign:
                switch (s.listInit) {
                    case Stmt::ListInit::Var: lists_[s.var] = listRef(s.listVar); break;
                    case Stmt::ListInit::Null: lists_[s.var] = nullptr; break;
                    case Stmt::ListInit::New:
                        lists_[s.var] = std::make_shared<std::vector<Integer>>();
                        break;
                }
                return Flow::Continue;
            case Stmt::Kind::ScannerRead:
                if (trace_.scannerReads >= in_.scanner.size())
                    return abort(Terminal::ScannerExhausted,
                                 "scanner read #" +
                                     std::to_string(trace_.scannerReads + 1));
                ints_[s.var] = in_.scanner[trace_.scannerReads++];
                return Flow::Continue;
            case Stmt::Kind::Query: return execQuery(s);
            case Stmt::Kind::RsNextStmt:
                rsNext(s.var);
                return Flow::Continue;
            case Stmt::Kind::ListAdd: {
                auto obj = listRef(s.var);
                if (!obj) return abort(Terminal::RuntimeError, s.var + " is null");
                obj->push_back(hostInt(*s.intExpr));
                return Flow::Continue;
            }
            case Stmt::Kind::ListRemove: {
                auto obj = listRef(s.var);
                if (!obj) return abort(Terminal::RuntimeError, s.var + " is null");
                Integer idx = hostInt(*s.intExpr);
                if (idx < 0 || idx >= (long long)obj->size())
                    return abort(Terminal::RuntimeError,
                                 s.var + ".remove(" + to_string(idx) + ") out of range");
                obj->erase(obj->begin() + (long)*to_int64(idx));
                return Flow::Continue;
            }
            case Stmt::Kind::Write: {
                WriteResult r = apply_write(schema_, *s.write, tables_, hostFn());
                if (!r.ok)
                    return abort(Terminal::UncaughtSqlViolation,
                                 r.violation + " violation on " + s.write->table);
                return Flow::Continue;
            }
            case Stmt::Kind::TryWrite: {
                WriteResult r = apply_write(schema_, *s.write, tables_, hostFn());
                if (!decision(s, Decision::Kind::CatchTaken, !r.ok))
                    return Flow::Aborted;
                if (!r.ok) return execBlock(s.handler);
                return Flow::Continue;
            }
            case Stmt::Kind::If: {
                bool c = cond(*s.cond);
                if (!decision(s, Decision::Kind::IfBranch, c)) return Flow::Aborted;
                return execBlock(c ? s.thenBody : s.elseBody);
            }
            case Stmt::Kind::While:
                for (;;) {
                    if (++steps_ > stepLimit_)
                        return abort(Terminal::RuntimeError, "statement budget exhausted");
                    bool c = cond(*s.cond);
                    if (!decision(s, c ? Decision::Kind::LoopEnter
                                       : Decision::Kind::LoopExit, c))
                        return Flow::Aborted;
                    if (!c) return Flow::Continue;
                    Flow f = execBlock(s.thenBody);
                    if (f != Flow::Continue) return f;
                }
            case Stmt::Kind::Assert: {
                bool c = cond(*s.cond);
                if (!decision(s, Decision::Kind::AssertOutcome, !c))
                    return Flow::Aborted;
                if (!c) return abort(Terminal::AssertViolation, "assert failed");
                return Flow::Continue;
            }
            case Stmt::Kind::Commit:
                snapshot_ = tables_;
                return Flow::Continue;
            case Stmt::Kind::Rollback:
                tables_ = snapshot_;
                return Flow::Continue;
            case Stmt::Kind::Return:
                returnStmt_ = &s;
                return Flow::Returned;
        }
        return Flow::Continue;
    }

    Flow execQuery(const Stmt& s) {
        const SelectQuery& q = *s.query;
        const TableDef& t = *schema_.table(q.table);
        std::vector<std::vector<Integer>> rows;
        for (const auto& r : tables_[q.table])
            if (eval_db_cond(t, r, q.where.get(), hostFn())) rows.push_back(r);
        size_t pkIdx = (size_t)t.pkPos() - 1;
        std::sort(rows.begin(), rows.end(),
                  [&](const auto& a, const auto& b) { return a[pkIdx] < b[pkIdx]; });

        // Impose the requested ordering when it is a permutation of what the
        // query actually matched; otherwise keep ascending-pk order.
        if (selectIdx_ < in_.rsOrderings.size()) {
            auto cand = in_.rsOrderings[selectIdx_].rows;
            auto sortedCand = cand;
            std::sort(sortedCand.begin(), sortedCand.end());
            auto sortedRows = rows;
            std::sort(sortedRows.begin(), sortedRows.end());
            if (sortedCand == sortedRows) rows = std::move(cand);
        }
        ++selectIdx_;

        std::string label = lower(s.var) + std::to_string(++rsCounter_[lower(s.var)]);
        trace_.selects.push_back({label, q.table, rows});
        rs_[s.var] = RsState{q.table, std::move(rows), -1};
        return Flow::Continue;
    }

    const Schema& schema_;
    const MethodAst& method_;
    const ReplayInputs& in_;
    const ReplayHooks& hooks_;
    std::map<const Stmt*, int> ownSites_;
    const std::map<const Stmt*, int>* sites_ = nullptr;

    DbTables tables_, snapshot_;
    std::map<std::string, Integer> ints_;
    std::map<std::string, std::shared_ptr<std::vector<Integer>>> lists_;
    std::map<std::string, RsState> rs_;
    std::map<std::string, int> rsCounter_;
    size_t selectIdx_ = 0;
    size_t steps_ = 0, stepLimit_ = 0;
    const Stmt* returnStmt_ = nullptr;
    Trace trace_;

public:
    bool pruned_ = false;
};

}  // namespace

Trace replay(const Schema& schema, const MethodAst& method,
             const ReplayInputs& inputs, const ReplayHooks& hooks) {
    Interp interp(schema, method, inputs, hooks);
    Trace t = interp.run();
    if (interp.pruned_) {
        t.terminal = Terminal::RuntimeError;
        t.detail = "guide rejected the next decision";
    }
    return t;
}

Trace replay(const Schema& schema, const MethodAst& method, const TestCase& tc) {
    return replay(schema, method, inputs_of(tc));
}

Conformance check_conformance(const Trace& trace, const Path& path,
                              const TestCase& tc) {
    size_t n = std::min(trace.decisions.size(), path.decisions.size());
    for (size_t i = 0; i < n; ++i)
        if (!(trace.decisions[i] == path.decisions[i]))
            return {false, "decision " + std::to_string(i) + ": path expects " +
                               decision_token(path.decisions[i]) + ", execution took " +
                               decision_token(trace.decisions[i])};
    if (trace.decisions.size() != path.decisions.size())
        return {false, "decision count: path has " +
                           std::to_string(path.decisions.size()) + ", execution took " +
                           std::to_string(trace.decisions.size())};

    bool pathViolates = path.terminal == TerminalKind::AssertViolation;
    bool traceViolates = trace.terminal == Terminal::AssertViolation;
    if (trace.terminal != Terminal::Completed && !traceViolates)
        return {false, std::string("execution ended abnormally: ") +
                           terminal_name(trace.terminal) + " (" + trace.detail + ")"};
    if (pathViolates != traceViolates)
        return {false, std::string("terminal mismatch: path ") +
                           (pathViolates ? "violates an assert" : "completes") +
                           ", execution " +
                           (traceViolates ? "violates an assert" : "completes")};

    if (trace.finalTables != tc.outputTables) return {false, "final table contents differ"};
    if (trace.finalLists != tc.outputLists) return {false, "final list contents differ"};
    if (tc.hasReturn) {
        if (tc.returnIsList) {
            if (trace.returnList != tc.returnList) return {false, "return value differs"};
        } else if (trace.returnInt != tc.returnInt) {
            return {false, "return value differs"};
        }
    }
    return {true, ""};
}

}  // namespace relsy::oracle
