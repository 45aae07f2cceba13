#include "relsy/symexec/exec.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "relsy/cfg.hpp"
#include "relsy/printer.hpp"

namespace relsy {
namespace {

using smt::Binder;
using smt::conjoin;
using smt::disjoin;
using smt::mkAnd;
using smt::mkApp;
using smt::mkBool;
using smt::mkEq;
using smt::mkExists;
using smt::mkForall;
using smt::mkImp;
using smt::mkInt;
using smt::mkNot;
using smt::mkOr;
using smt::mkSym;
using smt::Sort;
using smt::TermPtr;

std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

class Executor {
 public:
  Executor(const Schema& schema, const MethodAst& method, const Path& path)
      : schema_(schema), method_(method), path_(path), env_(schema), sites_(number_sites(method)) {}

  ExecResult run() {
    sys_.comment("path " + path_label(path_));
    emitSchema();
    emitParams();
    Flow flow = execBlock(method_.body);
    if (cursor_ != path_.decisions.size())
      throw std::logic_error("path decisions were not fully consumed");
    finish(flow);
    return {std::move(sys_), std::move(bind_)};
  }

 private:
  enum class Flow { Continue, Returned, Violated };

  // ---- schema and parameters ------------------------------------------------

  void emitSchema() {
    std::istringstream ddl(print_schema(schema_));
    for (std::string line; std::getline(ddl, line);)
      if (!line.empty()) sys_.comment(line);
    sys_.comment("New types for tables");
    for (const auto& t : schema_.tables) sys_.declareSort(t.name);
    for (const auto& t : schema_.tables) {
      sys_.comment("Input content of table " + capitalized(t.name));
      Sort row = Sort::rowSort(t.name);
      std::string member = env_.fresh(t.name);
      sys_.declareFun(member, {row}, Sort::boolSort());
      env_.setMemberSym(t.name, member);
      for (const auto& attr : t.attrs) {
        std::string sym = env_.fresh(attr);
        sys_.declareFun(sym, {row}, Sort::intSort());
        env_.setAttrSym(t.name, attr, sym);
      }
      for (const auto& co : t.checks)
        sys_.assertTerm(mkForall({{"a", row}},
                                 checkTerm(co, mkApp(env_.attrSym(t.name, co.attr), mkSym("a")))));
      sys_.assertTerm(pkUniqueness(t, member));
    }
    bool anyFk = false;
    for (const auto& t : schema_.tables) anyFk = anyFk || !t.fks.empty();
    if (anyFk) sys_.comment("Foreign keys");
    for (const auto& t : schema_.tables) {
      for (const auto& fk : t.fks) {
        Sort row = Sort::rowSort(t.name);
        Sort refRow = Sort::rowSort(fk.refTable);
        TermPtr a = mkSym("a"), b = mkSym("b");
        TermPtr referenced =
            mkAnd(mkApp(env_.memberSym(fk.refTable), b),
                  mkEq(mkApp(env_.attrSym(t.name, fk.attr), a),
                       mkApp(env_.attrSym(fk.refTable, fk.refAttr), b)));
        sys_.assertTerm(mkForall({{"a", row}},
                                 mkImp(mkApp(env_.memberSym(t.name), a),
                                       mkExists({{"b", refRow}}, referenced))));
      }
    }
    env_.beginTx();
    for (const auto& t : schema_.tables) bind_.inputTables[t.name] = currentTableBinding(t);
  }

  void emitParams() {
    sys_.declareBoundedList();
    for (const auto& p : method_.listParams) {
      sys_.comment("parameter List<Integer> " + p);
      std::string sym = env_.fresh(SymbolEnv::lowerBase(p));
      sys_.declareConst(sym, Sort::boundedList());
      sys_.assertTerm(mkImp(mkNot(mkApp("isNull", mkSym(sym))),
                            mkApp(">=", mkApp("size", mkSym(sym)), mkInt(0))));
      int obj = env_.newListObject(sym);
      env_.bindListVar(p, obj);
      bind_.inputLists.emplace_back(p, sym);
      paramObj_.emplace_back(p, obj);
    }
  }

  TableBinding currentTableBinding(const TableDef& t) const {
    TableBinding tb;
    tb.member = env_.memberSym(t.name);
    for (const auto& attr : t.attrs) tb.attrs.emplace_back(attr, env_.attrSym(t.name, attr));
    return tb;
  }

  // Primary-key uniqueness of `member` rows, reading attribute values through
  // the current attribute symbols.
  TermPtr pkUniqueness(const TableDef& t, const std::string& member) const {
    Sort row = Sort::rowSort(t.name);
    TermPtr a = mkSym("a"), b = mkSym("b");
    const std::string& pk = env_.attrSym(t.name, t.pk);
    return mkForall({{"a", row}, {"b", row}},
                    mkImp(mkAnd(mkAnd(mkApp(member, a), mkApp(member, b)),
                                mkEq(mkApp(pk, a), mkApp(pk, b))),
                          mkEq(a, b)));
  }

  TermPtr checkTerm(const CheckConstraint& co, TermPtr value) const {
    return mkApp(cmp_spelling(co.op), std::move(value), mkInt(Integer(co.bound)));
  }

  // ---- path decisions -------------------------------------------------------

  const Decision& nextDecision(const Stmt& s) {
    if (cursor_ >= path_.decisions.size())
      throw std::logic_error("path ends before all branching statements were decided");
    const Decision& d = path_.decisions[cursor_++];
    if (d.siteId != sites_.at(&s))
      throw std::logic_error("path decision does not belong to this statement");
    return d;
  }

  // ---- side constraints -----------------------------------------------------

  // Runtime-safety obligations of the statement currently being translated,
  // collected in evaluation order and asserted after the statement's own
  // constraints; duplicates within one statement collapse.
  void side(TermPtr t) {
    for (const auto& prev : sides_)
      if (term_equal(prev, t)) return;
    sides_.push_back(std::move(t));
  }
  void flushSides() {
    for (auto& t : sides_) sys_.assertTerm(std::move(t));
    sides_.clear();
  }

  // ---- host-language translation ---------------------------------------------

  TermPtr hostInt(const IntExpr& e) {
    switch (e.kind) {
      case IntExpr::Kind::Lit:
        return mkInt(Integer(e.text));
      case IntExpr::Kind::Var:
        return mkSym(env_.intSym(e.text));
      case IntExpr::Kind::Add:
        return mkApp("+", hostInt(*e.lhs), hostInt(*e.rhs));
      case IntExpr::Kind::Sub:
        return mkApp("-", hostInt(*e.lhs), hostInt(*e.rhs));
      case IntExpr::Kind::ListGet: {
        TermPtr idx = hostInt(*e.lhs);
        TermPtr list = mkSym(env_.listSym(e.text));
        side(mkNot(mkApp("isNull", list)));
        side(mkApp(">=", idx, mkInt(0)));
        side(mkApp("<", idx, mkApp("size", list)));
        return mkApp("select", mkApp("elements", list), idx);
      }
      case IntExpr::Kind::ListSize: {
        TermPtr list = mkSym(env_.listSym(e.text));
        side(mkNot(mkApp("isNull", list)));
        return mkApp("size", list);
      }
      case IntExpr::Kind::RsGetInt: {
        const auto& rs = env_.rs(e.text);
        if (rs.nextCount < 1)
          throw StaticallyInfeasiblePath("getInt on '" + e.text +
                                         "' before any next() call: no current row on any input");
        side(mkApp(">=", mkSym(rs.sizeSym), mkInt(rs.nextCount)));
        const std::string* attrSym = nullptr;
        for (const auto& [attr, sym] : rs.attrSnap)
          if (attr == e.attr) attrSym = &sym;
        if (!attrSym) throw std::logic_error("getInt attribute missing from result-set table");
        return mkApp(*attrSym, mkApp(rs.listSym, mkInt(rs.nextCount - 1)));
      }
    }
    throw std::logic_error("unhandled int expression");
  }

  TermPtr hostCond(const Cond& c) {
    switch (c.kind) {
      case Cond::Kind::BoolLit:
        return mkBool(c.value);
      case Cond::Kind::Not:
        return mkNot(hostCond(*c.lhs));
      case Cond::Kind::And:
        return mkAnd(hostCond(*c.lhs), hostCond(*c.rhs));
      case Cond::Kind::Or:
        return mkOr(hostCond(*c.lhs), hostCond(*c.rhs));
      case Cond::Kind::Cmp:
        return mkApp(cmp_spelling(c.op), hostInt(*c.e1), hostInt(*c.e2));
      case Cond::Kind::IsNull:
        return mkApp("isNull", mkSym(env_.listSym(c.var)));
      case Cond::Kind::RsNext: {
        auto& rs = env_.rs(c.var);
        ++rs.nextCount;
        return mkApp(">=", mkSym(rs.sizeSym), mkInt(rs.nextCount));
      }
    }
    throw std::logic_error("unhandled condition");
  }

  // ---- embedded SQL translation ----------------------------------------------

  TermPtr dbInt(const DbIntExpr& e, const TableDef& t, const TermPtr& row) {
    switch (e.kind) {
      case DbIntExpr::Kind::Lit:
        return mkInt(Integer(e.text));
      case DbIntExpr::Kind::Attr:
        return mkApp(env_.attrSym(t.name, e.text), row);
      case DbIntExpr::Kind::Add:
        return mkApp("+", dbInt(*e.lhs, t, row), dbInt(*e.rhs, t, row));
      case DbIntExpr::Kind::Sub:
        return mkApp("-", dbInt(*e.lhs, t, row), dbInt(*e.rhs, t, row));
      case DbIntExpr::Kind::Host:
        return hostInt(*e.host);
    }
    throw std::logic_error("unhandled SQL expression");
  }

  // WHERE-less statements behave as WHERE true.
  TermPtr dbCond(const DbCondPtr& c, const TableDef& t, const TermPtr& row) {
    if (!c) return mkBool(true);
    switch (c->kind) {
      case DbCond::Kind::Cmp:
        return mkApp(cmp_spelling(c->op), mkApp(env_.attrSym(t.name, c->attr), row),
                     dbInt(*c->rhs, t, row));
      case DbCond::Kind::And:
        return mkAnd(dbCond(c->c1, t, row), dbCond(c->c2, t, row));
      case DbCond::Kind::Or:
        return mkOr(dbCond(c->c1, t, row), dbCond(c->c2, t, row));
      case DbCond::Kind::Not:
        return mkNot(dbCond(c->c1, t, row));
    }
    throw std::logic_error("unhandled SQL condition");
  }

  // ---- statements -------------------------------------------------------------

  Flow execBlock(const Block& b) {
    for (const auto& s : b) {
      Flow f = execStmt(*s);
      if (f != Flow::Continue) return f;
    }
    return Flow::Continue;
  }

  Flow execStmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::IntAssign: {
        sys_.comment(intAssignEcho(s));
        TermPtr rhs = hostInt(*s.intExpr);
        std::string sym = env_.fresh(SymbolEnv::lowerBase(s.var));
        sys_.declareConst(sym, Sort::intSort());
        sys_.assertTerm(mkEq(mkSym(sym), rhs));
        env_.bindInt(s.var, sym);
        flushSides();
        return Flow::Continue;
      }
      case Stmt::Kind::ListAssign:
        execListAssign(s);
        return Flow::Continue;
      case Stmt::Kind::ScannerRead: {
        sys_.comment(std::string(s.declares ? "int " : "") + s.var + " = in.nextInt();");
        std::string sym = env_.fresh(SymbolEnv::lowerBase(s.var));
        sys_.declareConst(sym, Sort::intSort());
        env_.bindInt(s.var, sym);
        env_.pushScanner(sym);
        return Flow::Continue;
      }
      case Stmt::Kind::Query:
        execSelect(s);
        return Flow::Continue;
      case Stmt::Kind::RsNextStmt:
        sys_.comment(s.var + ".next();");
        ++env_.rs(s.var).nextCount;
        return Flow::Continue;
      case Stmt::Kind::ListAdd:
        execListAdd(s);
        return Flow::Continue;
      case Stmt::Kind::ListRemove:
        execListRemove(s);
        return Flow::Continue;
      case Stmt::Kind::Write: {
        sys_.comment("con.createStatement().execute(\"" + print_db_write(*s.write) + "\");");
        emitWrite(*s.write, /*failing=*/false);
        flushSides();
        return Flow::Continue;
      }
      case Stmt::Kind::TryWrite: {
        const Decision& d = nextDecision(s);
        if (d.kind != Decision::Kind::CatchTaken)
          throw std::logic_error("expected a try/catch decision");
        bool failing = d.flag;
        sys_.comment("try { con.createStatement().execute(\"" + print_db_write(*s.write) +
                     "\"); } catch (SQLException " + s.catchVar + ") -- " +
                     (failing ? "SQLException thrown" : "no exception"));
        emitWrite(*s.write, failing);
        flushSides();
        return failing ? execBlock(s.handler) : Flow::Continue;
      }
      case Stmt::Kind::If: {
        const Decision& d = nextDecision(s);
        if (d.kind != Decision::Kind::IfBranch)
          throw std::logic_error("expected an if decision");
        TermPtr cond = hostCond(*s.cond);
        sys_.comment("if (" + print_cond(*s.cond) + ") -- " + (d.flag ? "then" : "else") +
                     " branch");
        sys_.assertTerm(d.flag ? cond : mkNot(cond));
        flushSides();
        return execBlock(d.flag ? s.thenBody : s.elseBody);
      }
      case Stmt::Kind::While: {
        for (;;) {
          const Decision& d = nextDecision(s);
          if (d.kind != Decision::Kind::LoopEnter && d.kind != Decision::Kind::LoopExit)
            throw std::logic_error("expected a loop decision");
          TermPtr cond = hostCond(*s.cond);
          bool enter = d.kind == Decision::Kind::LoopEnter;
          sys_.comment("while (" + print_cond(*s.cond) + ") -- " +
                       (enter ? "loop entered" : "loop exited"));
          sys_.assertTerm(enter ? cond : mkNot(cond));
          flushSides();
          if (!enter) return Flow::Continue;
          Flow f = execBlock(s.thenBody);
          if (f != Flow::Continue) return f;
        }
      }
      case Stmt::Kind::Assert: {
        const Decision& d = nextDecision(s);
        if (d.kind != Decision::Kind::AssertOutcome)
          throw std::logic_error("expected an assert decision");
        TermPtr cond = hostCond(*s.cond);
        bool violated = d.flag;
        sys_.comment("assert " + print_cond(*s.cond) + "; -- " +
                     (violated ? "violated" : "holds"));
        sys_.assertTerm(violated ? mkNot(cond) : cond);
        flushSides();
        return violated ? Flow::Violated : Flow::Continue;
      }
      case Stmt::Kind::Commit:
        sys_.comment("con.commit();");
        env_.beginTx();
        return Flow::Continue;
      case Stmt::Kind::Rollback:
        sys_.comment("con.rollback();");
        env_.rollbackTx();
        return Flow::Continue;
      case Stmt::Kind::Return:
        sys_.comment(s.var.empty() ? "return;" : "return " + s.var + ";");
        return Flow::Returned;
    }
    throw std::logic_error("unhandled statement");
  }

  std::string intAssignEcho(const Stmt& s) const {
    return std::string(s.declares ? "int " : "") + s.var + " = " + print_int_expr(*s.intExpr) +
           ";";
  }

  void execListAssign(const Stmt& s) {
    std::string decl = s.declares ? "List<Integer> " : "";
    switch (s.listInit) {
      case Stmt::ListInit::Var: {
        // Aliasing: both variables share the object, hence the symbol.
        sys_.comment(decl + s.var + " = " + s.listVar + ";");
        env_.bindListVar(s.var, env_.listObject(s.listVar));
        return;
      }
      case Stmt::ListInit::Null: {
        sys_.comment(decl + s.var + " = null;");
        std::string sym = env_.fresh(SymbolEnv::lowerBase(s.var));
        sys_.declareConst(sym, Sort::boundedList());
        sys_.assertTerm(mkApp("isNull", mkSym(sym)));
        env_.bindListVar(s.var, env_.newListObject(sym));
        return;
      }
      case Stmt::ListInit::New: {
        sys_.comment(decl + s.var + " = new ArrayList<Integer>();");
        std::string sym = env_.fresh(SymbolEnv::lowerBase(s.var));
        sys_.declareConst(sym, Sort::boundedList());
        sys_.assertTerm(mkNot(mkApp("isNull", mkSym(sym))));
        sys_.assertTerm(mkEq(mkApp("size", mkSym(sym)), mkInt(0)));
        env_.bindListVar(s.var, env_.newListObject(sym));
        return;
      }
    }
  }

  void execSelect(const Stmt& s) {
    const SelectQuery& q = *s.query;
    sys_.comment(std::string(s.declares ? "ResultSet " : "") + s.var +
                 " = con.createStatement().executeQuery(\"" + print_select(q) + "\");");
    const TableDef& t = *schema_.table(q.table);
    Sort row = Sort::rowSort(t.name);

    SymbolEnv::RsInfo info;
    info.stem = env_.fresh(SymbolEnv::lowerBase(s.var));
    info.table = t.name;
    info.sizeSym = info.stem + "Size";
    info.listSym = info.stem + "List";
    info.invSym = info.stem + "InvertedList";
    info.trigSym = info.stem + "Trigger";
    for (const auto& n : {info.sizeSym, info.listSym, info.invSym, info.trigSym}) env_.reserve(n);
    info.projection = q.projection;
    for (const auto& attr : t.attrs) info.attrSnap.emplace_back(attr, env_.attrSym(t.name, attr));

    sys_.declareConst(info.sizeSym, Sort::intSort());
    sys_.declareFun(info.listSym, {Sort::intSort()}, row);
    sys_.declareFun(info.invSym, {row}, Sort::intSort());
    sys_.declareFun(info.trigSym, {Sort::intSort()}, Sort::boolSort());

    const std::string& member = env_.memberSym(t.name);
    TermPtr size = mkSym(info.sizeSym);
    auto selected = [&](const TermPtr& r) { return mkAnd(mkApp(member, r), dbCond(q.where, t, r)); };
    TermPtr c = mkSym("c");
    TermPtr i = mkSym("i");
    TermPtr inRange = mkAnd(mkApp(">=", i, mkInt(0)), mkApp("<", i, size));
    TermPtr listAtI = mkApp(info.listSym, i);
    TermPtr pattern = mkApp(info.trigSym, i);

    // The result set holds exactly the rows of the current table content that
    // satisfy the WHERE condition, enumerated without gaps or repetition.
    sys_.assertTerm(mkAnd(mkApp(">=", size, mkInt(0)),
                          mkImp(mkEq(size, mkInt(0)),
                                mkForall({{"c", row}}, mkNot(selected(c))))));
    sys_.assertTerm(mkForall({{"c", row}},
                             mkImp(selected(c),
                                   mkAnd(mkApp(">=", mkApp(info.invSym, c), mkInt(0)),
                                         mkApp("<", mkApp(info.invSym, c), size)))));
    sys_.assertTerm(mkForall({{"c", row}},
                             mkImp(selected(c), mkEq(c, mkApp(info.listSym, mkApp(info.invSym, c))))));
    sys_.assertTerm(mkForall({{"i", Sort::intSort()}},
                             mkImp(inRange, mkEq(i, mkApp(info.invSym, listAtI)))));
    sys_.assertTerm(mkForall({{"i", Sort::intSort()}}, mkImp(inRange, selected(listAtI)), pattern));
    sys_.assertTerm(mkImp(mkApp(">=", mkInt(0), size), mkApp(info.trigSym, mkInt(1))));
    sys_.assertTerm(mkForall({{"i", Sort::intSort()}},
                             mkImp(inRange, mkApp(info.trigSym, mkApp("+", i, mkInt(1)))),
                             pattern));

    env_.bindRs(s.var, std::move(info));
    flushSides();
  }

  void execListAdd(const Stmt& s) {
    sys_.comment(s.var + ".add(" + print_int_expr(*s.intExpr) + ");");
    TermPtr value = hostInt(*s.intExpr);
    TermPtr old = mkSym(env_.listSym(s.var));
    std::string nuName = env_.fresh(SymbolEnv::lowerBase(s.var));
    TermPtr nu = mkSym(nuName);
    sys_.declareConst(nuName, Sort::boundedList());
    sys_.assertTerm(mkNot(mkApp("isNull", old)));
    sys_.assertTerm(mkNot(mkApp("isNull", nu)));
    sys_.assertTerm(mkEq(mkApp("size", nu), mkApp("+", mkApp("size", old), mkInt(1))));
    sys_.assertTerm(mkEq(mkApp("elements", nu),
                         mkApp("store", {mkApp("elements", old), mkApp("size", old), value})));
    env_.setObjectSym(env_.listObject(s.var), nuName);
    flushSides();
  }

  void execListRemove(const Stmt& s) {
    sys_.comment(s.var + ".remove(" + print_int_expr(*s.intExpr) + ");");
    TermPtr idx = hostInt(*s.intExpr);
    TermPtr old = mkSym(env_.listSym(s.var));
    std::string nuName = env_.fresh(SymbolEnv::lowerBase(s.var));
    TermPtr nu = mkSym(nuName);
    TermPtr i = mkSym("i");
    sys_.declareConst(nuName, Sort::boundedList());
    sys_.assertTerm(mkNot(mkApp("isNull", old)));
    sys_.assertTerm(mkNot(mkApp("isNull", nu)));
    sys_.assertTerm(mkApp(">=", mkApp("size", old), mkInt(1)));
    sys_.assertTerm(mkEq(mkApp("size", nu), mkApp("-", mkApp("size", old), mkInt(1))));
    sys_.assertTerm(mkApp(">=", idx, mkInt(0)));
    sys_.assertTerm(mkApp("<", idx, mkApp("size", old)));
    sys_.assertTerm(mkForall(
        {{"i", Sort::intSort()}},
        mkImp(mkAnd(mkApp(">=", i, mkInt(0)), mkApp("<", i, idx)),
              mkEq(mkApp("select", mkApp("elements", old), i),
                   mkApp("select", mkApp("elements", nu), i)))));
    sys_.assertTerm(mkForall(
        {{"i", Sort::intSort()}},
        mkImp(mkAnd(mkApp(">=", i, idx), mkApp("<", i, mkApp("size", nu))),
              mkEq(mkApp("select", mkApp("elements", old), mkApp("+", i, mkInt(1))),
                   mkApp("select", mkApp("elements", nu), i)))));
    env_.setObjectSym(env_.listObject(s.var), nuName);
    flushSides();
  }

  // ---- database writes ----------------------------------------------------------

  void emitWrite(const DbWrite& w, bool failing) {
    switch (w.kind) {
      case DbWrite::Kind::Insert:
        emitInsert(w, failing);
        return;
      case DbWrite::Kind::Update:
        emitUpdate(w, failing);
        return;
      case DbWrite::Kind::Delete:
        emitDelete(w, failing);
        return;
    }
  }

  void emitInsert(const DbWrite& w, bool failing) {
    const TableDef& t = *schema_.table(w.table);
    Sort row = Sort::rowSort(t.name);
    TermPtr a = mkSym("a"), b = mkSym("b");
    std::vector<TermPtr> vals;
    for (const auto& e : w.insertValues) vals.push_back(hostInt(*e));
    const std::string& member = env_.memberSym(t.name);
    TermPtr pkVal = vals.at(static_cast<size_t>(t.pkPos()) - 1);
    const std::string& pkSym = env_.attrSym(t.name, t.pk);

    if (!failing) {
      sys_.comment("Inserted primary key value does not already exist");
      sys_.assertTerm(mkForall({{"a", row}},
                               mkImp(mkApp(member, a),
                                     mkNot(mkEq(mkApp(pkSym, a), pkVal)))));
      for (const auto& fk : t.fks) {
        sys_.comment("Values constrained by foreign key " + fk.constraintName +
                     " reference existing rows");
        TermPtr fkVal = vals.at(static_cast<size_t>(t.attrPos(fk.attr)) - 1);
        sys_.assertTerm(
            mkExists({{"a", Sort::rowSort(fk.refTable)}},
                     mkAnd(mkEq(mkApp(env_.attrSym(fk.refTable, fk.refAttr), a), fkVal),
                           mkApp(env_.memberSym(fk.refTable), a))));
      }
      sys_.comment("Symbol for new table content");
      std::string nu = env_.fresh(t.name);
      sys_.declareFun(nu, {row}, Sort::boolSort());
      sys_.comment("Constraints describing new table content");
      sys_.assertTerm(mkForall({{"a", row}}, mkImp(mkApp(member, a), mkApp(nu, a))));
      std::vector<TermPtr> eqs;
      for (size_t i = 0; i < t.attrs.size(); ++i)
        eqs.push_back(mkEq(mkApp(env_.attrSym(t.name, t.attrs[i]), a), vals.at(i)));
      sys_.assertTerm(mkExists({{"a", row}}, mkAnd(conjoin(eqs), mkApp(nu, a))));
      sys_.assertTerm(mkForall({{"a", row}},
                               mkImp(mkAnd(mkNot(mkApp(member, a)), mkNot(conjoin(eqs))),
                                     mkNot(mkApp(nu, a)))));
      sys_.comment("No duplicate inserted row");
      sys_.assertTerm(mkForall({{"a", row}, {"b", row}},
                               mkImp(mkAnd(mkAnd(mkApp(nu, a), mkApp(nu, b)),
                                           mkEq(mkApp(pkSym, a), mkApp(pkSym, b))),
                                     mkEq(a, b))));
      env_.setMemberSym(t.name, nu);
      return;
    }

    std::vector<TermPtr> clauses;
    clauses.push_back(mkExists({{"a", row}},
                               mkAnd(mkApp(member, a), mkEq(mkApp(pkSym, a), pkVal))));
    for (const auto& fk : t.fks) {
      TermPtr fkVal = vals.at(static_cast<size_t>(t.attrPos(fk.attr)) - 1);
      clauses.push_back(
          mkForall({{"a", Sort::rowSort(fk.refTable)}},
                   mkImp(mkApp(env_.memberSym(fk.refTable), a),
                         mkNot(mkEq(mkApp(env_.attrSym(fk.refTable, fk.refAttr), a), fkVal)))));
    }
    for (const auto& co : t.checks) {
      TermPtr coVal = vals.at(static_cast<size_t>(t.attrPos(co.attr)) - 1);
      clauses.push_back(mkNot(checkTerm(co, coVal)));
    }
    sys_.comment("Insert violates a schema integrity constraint");
    sys_.assertTerm(disjoin(clauses));
  }

  void emitUpdate(const DbWrite& w, bool failing) {
    const TableDef& t = *schema_.table(w.table);
    Sort row = Sort::rowSort(t.name);
    const std::string& member = env_.memberSym(t.name);
    const std::string oldAttr = env_.attrSym(t.name, w.setAttr);
    const ForeignKey* fkOnSet = t.fkOn(w.setAttr);
    bool setsPk = w.setAttr == t.pk;
    auto incoming = schema_.incomingFks(t.name);
    auto where = [&](const TermPtr& r) { return dbCond(w.where, t, r); };
    auto setVal = [&](const TermPtr& r) { return dbInt(*w.setExpr, t, r); };

    if (!failing) {
      sys_.comment("Symbol for new attribute values");
      std::string nu = env_.fresh(w.setAttr);
      sys_.declareFun(nu, {row}, Sort::intSort());
      sys_.comment("Constraints describing new attribute values");
      TermPtr p = mkSym("p");
      sys_.assertTerm(mkForall(
          {{"p", row}},
          mkImp(mkOr(mkAnd(mkApp(member, p), mkNot(where(p))), mkNot(mkApp(member, p))),
                mkEq(mkApp(nu, p), mkApp(oldAttr, p)))));
      sys_.assertTerm(mkForall({{"p", row}},
                               mkImp(mkAnd(mkApp(member, p), where(p)),
                                     mkEq(mkApp(nu, p), setVal(p)))));
      TermPtr a = mkSym("a"), b = mkSym("b");
      if (fkOnSet) {
        sys_.comment("Updated values constrained by foreign key " + fkOnSet->constraintName +
                     " reference existing rows");
        sys_.assertTerm(mkForall(
            {{"a", row}},
            mkImp(mkApp(member, a),
                  mkExists({{"b", Sort::rowSort(fkOnSet->refTable)}},
                           mkAnd(mkApp(env_.memberSym(fkOnSet->refTable), b),
                                 mkEq(mkApp(nu, a),
                                      mkApp(env_.attrSym(fkOnSet->refTable, fkOnSet->refAttr),
                                            b)))))));
      }
      if (setsPk) {
        sys_.comment("Updated primary key values stay unique");
        sys_.assertTerm(mkForall({{"a", row}, {"b", row}},
                                 mkImp(mkAnd(mkAnd(mkApp(member, a), mkApp(member, b)),
                                             mkEq(mkApp(nu, a), mkApp(nu, b))),
                                       mkEq(a, b))));
        for (const auto& ifk : incoming) {
          sys_.comment("Update of the referenced primary key leaves no pending reference via " +
                       ifk.fromTable + "." + ifk.attr);
          sys_.assertTerm(mkForall({{"a", row}, {"b", Sort::rowSort(ifk.fromTable)}},
                                   mkNot(updatePendingRefBody(t, ifk, a, b, where, setVal))));
        }
      }
      for (const auto& co : t.checks) {
        if (co.attr != w.setAttr) continue;
        sys_.comment("Updated values do not violate the check constraint");
        sys_.assertTerm(mkForall({{"a", row}}, checkTerm(co, mkApp(nu, a))));
      }
      env_.setAttrSym(t.name, w.setAttr, nu);
      return;
    }

    std::vector<TermPtr> clauses;
    TermPtr a = mkSym("a"), b = mkSym("b");
    if (setsPk) {
      clauses.push_back(mkExists(
          {{"a", row}, {"b", row}},
          mkAnd(mkAnd(mkApp(member, a), mkAnd(mkApp(member, b), mkNot(mkEq(a, b)))),
                mkOr(mkAnd(where(a), mkAnd(where(b), mkEq(setVal(a), setVal(b)))),
                     mkAnd(mkNot(where(a)),
                           mkAnd(where(b), mkEq(mkApp(oldAttr, a), setVal(b))))))));
      for (const auto& ifk : incoming)
        clauses.push_back(mkExists({{"a", row}, {"b", Sort::rowSort(ifk.fromTable)}},
                                   updatePendingRefBody(t, ifk, a, b, where, setVal)));
    }
    if (fkOnSet) {
      clauses.push_back(mkExists(
          {{"a", row}},
          mkAnd(mkAnd(mkApp(member, a), where(a)),
                mkForall({{"b", Sort::rowSort(fkOnSet->refTable)}},
                         mkImp(mkApp(env_.memberSym(fkOnSet->refTable), b),
                               mkNot(mkEq(mkApp(env_.attrSym(fkOnSet->refTable, fkOnSet->refAttr),
                                                b),
                                          setVal(a))))))));
    }
    for (const auto& co : t.checks) {
      if (co.attr != w.setAttr) continue;
      clauses.push_back(mkExists(
          {{"a", row}},
          mkAnd(mkAnd(mkApp(member, a), where(a)), mkNot(checkTerm(co, setVal(a))))));
    }
    if (clauses.empty())
      throw StaticallyInfeasiblePath(
          "update of an unconstrained attribute cannot violate any integrity constraint");
    sys_.comment("Update violates a schema integrity constraint");
    sys_.assertTerm(disjoin(clauses));
  }

  // A row `a` of the updated table matched by WHERE whose primary key actually
  // changes while row `b` of the referencing table still holds its old value.
  template <typename WhereFn, typename ValFn>
  TermPtr updatePendingRefBody(const TableDef& t, const IncomingFk& ifk, const TermPtr& a,
                               const TermPtr& b, const WhereFn& where, const ValFn& setVal) {
    const std::string& oldAttr = env_.attrSym(t.name, t.pk);
    return mkAnd(mkAnd(mkApp(env_.memberSym(t.name), a),
                       mkApp(env_.memberSym(ifk.fromTable), b)),
                 mkAnd(mkAnd(mkNot(mkEq(mkApp(oldAttr, a), setVal(a))),
                             mkEq(mkApp(oldAttr, a), mkApp(env_.attrSym(ifk.fromTable, ifk.attr), b))),
                       where(a)));
  }

  void emitDelete(const DbWrite& w, bool failing) {
    const TableDef& t = *schema_.table(w.table);
    Sort row = Sort::rowSort(t.name);
    const std::string& member = env_.memberSym(t.name);
    auto incoming = schema_.incomingFks(t.name);
    TermPtr a = mkSym("a"), b = mkSym("b");
    auto where = [&](const TermPtr& r) { return dbCond(w.where, t, r); };

    if (!failing) {
      sys_.comment("Symbol for new table content");
      std::string nu = env_.fresh(t.name);
      sys_.declareFun(nu, {row}, Sort::boolSort());
      sys_.comment("Constraints describing new table content");
      sys_.assertTerm(mkForall(
          {{"a", row}}, mkEq(mkApp(nu, a), mkAnd(mkApp(member, a), mkNot(where(a))))));
      for (const auto& ifk : incoming) {
        sys_.comment("Delete leaves no pending reference via " + ifk.fromTable + "." + ifk.attr);
        sys_.assertTerm(mkForall(
            {{"a", Sort::rowSort(ifk.fromTable)}, {"b", row}},
            mkImp(mkAnd(mkApp(member, b),
                        mkAnd(mkNot(mkApp(nu, b)), mkApp(env_.memberSym(ifk.fromTable), a))),
                  mkNot(mkEq(mkApp(env_.attrSym(t.name, t.pk), b),
                             mkApp(env_.attrSym(ifk.fromTable, ifk.attr), a))))));
      }
      env_.setMemberSym(t.name, nu);
      return;
    }

    std::vector<TermPtr> clauses;
    for (const auto& ifk : incoming)
      clauses.push_back(mkExists(
          {{"a", Sort::rowSort(ifk.fromTable)}, {"b", row}},
          mkAnd(mkAnd(mkAnd(mkApp(member, b), mkApp(env_.memberSym(ifk.fromTable), a)),
                      where(b)),
                mkEq(mkApp(env_.attrSym(t.name, t.pk), b),
                     mkApp(env_.attrSym(ifk.fromTable, ifk.attr), a)))));
    if (clauses.empty())
      throw StaticallyInfeasiblePath(
          "delete from a table no foreign key references cannot violate any integrity constraint");
    sys_.comment("Delete leaves pending references");
    sys_.assertTerm(disjoin(clauses));
  }

  // ---- end of path -----------------------------------------------------------

  void finish(Flow flow) {
    if (flow == Flow::Violated) {
      // An uncaught AssertionError leaves the transaction uncommitted; its
      // changes are not part of the observable output state.
      env_.rollbackTx();
    }
    for (const auto& t : schema_.tables) bind_.outputTables[t.name] = currentTableBinding(t);
    for (const auto& [p, obj] : paramObj_) bind_.outputLists.emplace_back(p, env_.objectSym(obj));
    bind_.scanner = env_.scannerLog();
    if (path_.terminal == TerminalKind::Return && path_.returnStmt &&
        !path_.returnStmt->var.empty()) {
      if (method_.returnType == ReturnType::Int) {
        bind_.returnSym = env_.intSym(path_.returnStmt->var);
      } else if (method_.returnType == ReturnType::IntList) {
        bind_.returnSym = env_.listSym(path_.returnStmt->var);
        bind_.returnIsList = true;
      }
    }
    for (const auto& rs : env_.resultSets()) {
      RsBinding rb;
      rb.stem = rs.stem;
      rb.table = rs.table;
      rb.sizeSym = rs.sizeSym;
      rb.listSym = rs.listSym;
      rb.attrs = rs.attrSnap;
      bind_.resultSets.push_back(std::move(rb));
    }
  }

  const Schema& schema_;
  const MethodAst& method_;
  const Path& path_;
  SymbolEnv env_;
  smt::ConstraintSystem sys_;
  Bindings bind_;
  std::map<const Stmt*, int> sites_;
  size_t cursor_ = 0;
  std::vector<TermPtr> sides_;
  std::vector<std::pair<std::string, int>> paramObj_;
};

}  // namespace

ExecResult exec_path(const Schema& schema, const MethodAst& method, const Path& path) {
  return Executor(schema, method, path).run();
}

}  // namespace relsy
