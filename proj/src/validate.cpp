#include "relsy/validate.hpp"

#include <map>
#include <set>

namespace relsy {
namespace {

enum class VarKind { Int, List, Rs };

const char* kind_name(VarKind k) {
  switch (k) {
    case VarKind::Int: return "int";
    case VarKind::List: return "List<Integer>";
    case VarKind::Rs: return "ResultSet";
  }
  return "?";
}

class Validator {
 public:
  Validator(const Schema& schema, const MethodAst& m) : schema_(schema), m_(m) {}

  std::vector<Diagnostic> run() {
    scopes_.emplace_back();
    for (const auto& p : m_.listParams) scopes_.back()[p] = VarKind::List;
    walk(m_.body);
    return std::move(diags_);
  }

 private:
  const Schema& schema_;
  const MethodAst& m_;
  std::vector<Diagnostic> diags_;
  std::vector<std::map<std::string, VarKind>> scopes_;
  // Queries possibly bound to each ResultSet variable at the current point.
  std::map<std::string, std::set<const SelectQuery*>> rsBindings_;

  void report(SourceLoc loc, const std::string& msg) { diags_.push_back({loc, msg}); }

  const VarKind* lookup(const std::string& v) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(v);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  // Returns false if the variable cannot be used (undeclared / wrong kind).
  bool expectKind(SourceLoc loc, const std::string& v, VarKind want) {
    if (v == "con" || v == "in") {
      report(loc, "'" + v + "' cannot be used as a variable");
      return false;
    }
    const VarKind* k = lookup(v);
    if (!k) {
      report(loc, "use of undeclared variable '" + v + "'");
      return false;
    }
    if (*k != want) {
      report(loc, "variable '" + v + "' has type " + kind_name(*k) + ", expected " +
                      kind_name(want));
      return false;
    }
    return true;
  }

  void declare(SourceLoc loc, const std::string& v, VarKind k) {
    if (v == "con" || v == "in") {
      report(loc, "'" + v + "' is reserved and cannot be declared");
      return;
    }
    auto& scope = scopes_.back();
    if (scope.count(v)) {
      report(loc, "redeclaration of '" + v + "' in the same scope");
      return;
    }
    scope[v] = k;
  }

  // Assignment without a declaration: target must already exist with the kind.
  void assignTarget(SourceLoc loc, const std::string& v, VarKind k) {
    expectKind(loc, v, k);
  }

  void walk(const Block& b) {
    for (const auto& s : b) walkStmt(*s);
  }

  void walkScoped(const Block& b) {
    scopes_.emplace_back();
    walk(b);
    scopes_.pop_back();
  }

  void walkStmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::IntAssign:
        checkIntExpr(*s.intExpr);
        if (s.declares) declare(s.loc, s.var, VarKind::Int);
        else assignTarget(s.loc, s.var, VarKind::Int);
        break;
      case Stmt::Kind::ScannerRead:
        if (s.declares) declare(s.loc, s.var, VarKind::Int);
        else assignTarget(s.loc, s.var, VarKind::Int);
        break;
      case Stmt::Kind::ListAssign:
        if (s.listInit == Stmt::ListInit::Var) expectKind(s.loc, s.listVar, VarKind::List);
        if (s.declares) declare(s.loc, s.var, VarKind::List);
        else assignTarget(s.loc, s.var, VarKind::List);
        break;
      case Stmt::Kind::Query: {
        checkSelect(*s.query);
        if (s.declares) declare(s.loc, s.var, VarKind::Rs);
        else assignTarget(s.loc, s.var, VarKind::Rs);
        rsBindings_[s.var] = {s.query.get()};
        break;
      }
      case Stmt::Kind::RsNextStmt:
        expectKind(s.loc, s.var, VarKind::Rs);
        break;
      case Stmt::Kind::ListAdd:
      case Stmt::Kind::ListRemove:
        expectKind(s.loc, s.var, VarKind::List);
        checkIntExpr(*s.intExpr);
        break;
      case Stmt::Kind::Write:
        checkWrite(*s.write);
        break;
      case Stmt::Kind::TryWrite: {
        checkWrite(*s.write);
        walkScoped(s.handler);
        break;
      }
      case Stmt::Kind::If: {
        checkCond(*s.cond);
        auto pre = rsBindings_;
        walkScoped(s.thenBody);
        auto afterThen = std::move(rsBindings_);
        rsBindings_ = pre;
        walkScoped(s.elseBody);
        mergeBindings(afterThen);
        break;
      }
      case Stmt::Kind::While: {
        checkCond(*s.cond);
        auto pre = rsBindings_;
        walkScoped(s.thenBody);
        mergeBindings(pre);
        break;
      }
      case Stmt::Kind::Assert:
        checkCond(*s.cond);
        break;
      case Stmt::Kind::Commit:
      case Stmt::Kind::Rollback:
        break;
      case Stmt::Kind::Return: {
        if (m_.returnType == ReturnType::Void) {
          report(s.loc, "void method cannot return a value");
          break;
        }
        expectKind(s.loc, s.var,
                   m_.returnType == ReturnType::Int ? VarKind::Int : VarKind::List);
        break;
      }
    }
  }

  void mergeBindings(const std::map<std::string, std::set<const SelectQuery*>>& other) {
    for (const auto& [v, qs] : other) rsBindings_[v].insert(qs.begin(), qs.end());
  }

  void checkIntExpr(const IntExpr& e) {
    switch (e.kind) {
      case IntExpr::Kind::Lit:
        break;
      case IntExpr::Kind::Var:
        expectKind(e.loc, e.text, VarKind::Int);
        break;
      case IntExpr::Kind::Add:
      case IntExpr::Kind::Sub:
        checkIntExpr(*e.lhs);
        checkIntExpr(*e.rhs);
        break;
      case IntExpr::Kind::ListGet:
        expectKind(e.loc, e.text, VarKind::List);
        checkIntExpr(*e.lhs);
        break;
      case IntExpr::Kind::ListSize:
        expectKind(e.loc, e.text, VarKind::List);
        break;
      case IntExpr::Kind::RsGetInt: {
        if (!expectKind(e.loc, e.text, VarKind::Rs)) break;
        auto it = rsBindings_.find(e.text);
        if (it == rsBindings_.end() || it->second.empty()) break;
        for (const SelectQuery* q : it->second) {
          bool inProjection = false;
          for (const auto& a : q->projection)
            if (a == e.attr) inProjection = true;
          if (!inProjection)
            report(e.loc, "getInt(\"" + e.attr + "\") is not in the projection of the query bound to '" +
                              e.text + "'");
        }
        break;
      }
    }
  }

  void checkCond(const Cond& c) {
    switch (c.kind) {
      case Cond::Kind::BoolLit:
        break;
      case Cond::Kind::Not:
        checkCond(*c.lhs);
        break;
      case Cond::Kind::And:
      case Cond::Kind::Or:
        checkCond(*c.lhs);
        checkCond(*c.rhs);
        break;
      case Cond::Kind::Cmp:
        checkIntExpr(*c.e1);
        checkIntExpr(*c.e2);
        break;
      case Cond::Kind::IsNull:
        expectKind(c.loc, c.var, VarKind::List);
        break;
      case Cond::Kind::RsNext:
        expectKind(c.loc, c.var, VarKind::Rs);
        break;
    }
  }

  const TableDef* checkTable(SourceLoc loc, const std::string& name) {
    const TableDef* t = schema_.table(name);
    if (!t) report(loc, "unknown table '" + name + "'");
    return t;
  }

  void checkAttr(SourceLoc loc, const TableDef* t, const std::string& attr) {
    if (t && !t->hasAttr(attr))
      report(loc, "table '" + t->name + "' has no attribute '" + attr + "'");
  }

  void checkDbExpr(const DbIntExpr& e, const TableDef* t) {
    switch (e.kind) {
      case DbIntExpr::Kind::Lit:
        break;
      case DbIntExpr::Kind::Attr:
        checkAttr(e.loc, t, e.text);
        break;
      case DbIntExpr::Kind::Add:
      case DbIntExpr::Kind::Sub:
        checkDbExpr(*e.lhs, t);
        checkDbExpr(*e.rhs, t);
        break;
      case DbIntExpr::Kind::Host:
        checkIntExpr(*e.host);
        break;
    }
  }

  void checkDbCond(const DbCond& c, const TableDef* t) {
    switch (c.kind) {
      case DbCond::Kind::Cmp:
        checkAttr(c.loc, t, c.attr);
        checkDbExpr(*c.rhs, t);
        break;
      case DbCond::Kind::And:
      case DbCond::Kind::Or:
        checkDbCond(*c.c1, t);
        checkDbCond(*c.c2, t);
        break;
      case DbCond::Kind::Not:
        checkDbCond(*c.c1, t);
        break;
    }
  }

  void checkSelect(const SelectQuery& q) {
    const TableDef* t = checkTable(q.loc, q.table);
    for (const auto& a : q.projection) checkAttr(q.loc, t, a);
    if (q.where) checkDbCond(*q.where, t);
  }

  void checkWrite(const DbWrite& w) {
    const TableDef* t = checkTable(w.loc, w.table);
    switch (w.kind) {
      case DbWrite::Kind::Insert:
        if (t && w.insertValues.size() != t->attrs.size())
          report(w.loc, "INSERT into '" + w.table + "' provides " +
                            std::to_string(w.insertValues.size()) + " values for " +
                            std::to_string(t->attrs.size()) + " attributes");
        for (const auto& v : w.insertValues) checkIntExpr(*v);
        break;
      case DbWrite::Kind::Update:
        checkAttr(w.loc, t, w.setAttr);
        checkDbExpr(*w.setExpr, t);
        if (w.where) checkDbCond(*w.where, t);
        break;
      case DbWrite::Kind::Delete:
        if (w.where) checkDbCond(*w.where, t);
        break;
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate(const Schema& schema, const MethodAst& method) {
  return Validator(schema, method).run();
}

}  // namespace relsy
