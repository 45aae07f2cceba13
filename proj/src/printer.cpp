#include "relsy/printer.hpp"

#include <sstream>

namespace relsy {
namespace {

void printIntExpr(std::ostream& os, const IntExpr& e);

// Spliced host expression inside a SQL string.  Canonical expression forms
// are all primaries (binary operators print their own parentheses), so the
// splice re-parses as one concatenation operand.
void printSplice(std::ostream& os, const IntExpr& e) {
  os << "\"+";
  printIntExpr(os, e);
  os << "+\"";
}

void printIntExpr(std::ostream& os, const IntExpr& e) {
  switch (e.kind) {
    case IntExpr::Kind::Lit:
    case IntExpr::Kind::Var:
      os << e.text;
      break;
    case IntExpr::Kind::Add:
    case IntExpr::Kind::Sub:
      os << "(";
      printIntExpr(os, *e.lhs);
      os << (e.kind == IntExpr::Kind::Add ? " + " : " - ");
      printIntExpr(os, *e.rhs);
      os << ")";
      break;
    case IntExpr::Kind::ListGet:
      os << e.text << ".get(";
      printIntExpr(os, *e.lhs);
      os << ")";
      break;
    case IntExpr::Kind::ListSize:
      os << e.text << ".size()";
      break;
    case IntExpr::Kind::RsGetInt:
      os << e.text << ".getInt(\"" << e.attr << "\")";
      break;
  }
}

void printCond(std::ostream& os, const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::BoolLit:
      os << (c.value ? "true" : "false");
      break;
    case Cond::Kind::Not:
      os << "!";
      printCond(os, *c.lhs);
      break;
    case Cond::Kind::And:
    case Cond::Kind::Or:
      os << "(";
      printCond(os, *c.lhs);
      os << (c.kind == Cond::Kind::And ? " & " : " | ");
      printCond(os, *c.rhs);
      os << ")";
      break;
    case Cond::Kind::Cmp:
      os << "(";
      printIntExpr(os, *c.e1);
      os << " " << (c.op == CmpOp::Lt ? "<" : c.op == CmpOp::Gt ? ">" : "==") << " ";
      printIntExpr(os, *c.e2);
      os << ")";
      break;
    case Cond::Kind::IsNull:
      os << "(" << c.var << " == null)";
      break;
    case Cond::Kind::RsNext:
      os << c.var << ".next()";
      break;
  }
}

void printDbExpr(std::ostream& os, const DbIntExpr& e) {
  switch (e.kind) {
    case DbIntExpr::Kind::Lit:
    case DbIntExpr::Kind::Attr:
      os << e.text;
      break;
    case DbIntExpr::Kind::Add:
    case DbIntExpr::Kind::Sub:
      os << "(";
      printDbExpr(os, *e.lhs);
      os << (e.kind == DbIntExpr::Kind::Add ? " + " : " - ");
      printDbExpr(os, *e.rhs);
      os << ")";
      break;
    case DbIntExpr::Kind::Host:
      printSplice(os, *e.host);
      break;
  }
}

void printDbCond(std::ostream& os, const DbCond& c) {
  switch (c.kind) {
    case DbCond::Kind::Cmp:
      os << c.attr << " " << cmp_spelling(c.op) << " ";
      printDbExpr(os, *c.rhs);
      break;
    case DbCond::Kind::And:
    case DbCond::Kind::Or:
      os << "(";
      printDbCond(os, *c.c1);
      os << (c.kind == DbCond::Kind::And ? " AND " : " OR ");
      printDbCond(os, *c.c2);
      os << ")";
      break;
    case DbCond::Kind::Not:
      os << "NOT ";
      printDbCond(os, *c.c1);
      break;
  }
}

void printSelectInner(std::ostream& os, const SelectQuery& q) {
  os << "SELECT ";
  for (size_t i = 0; i < q.projection.size(); ++i) {
    if (i) os << ", ";
    os << q.projection[i];
  }
  os << " FROM " << q.table;
  if (q.where) {
    os << " WHERE ";
    printDbCond(os, *q.where);
  }
}

void printWriteInner(std::ostream& os, const DbWrite& w) {
  switch (w.kind) {
    case DbWrite::Kind::Insert:
      os << "INSERT INTO " << w.table << " VALUES (";
      for (size_t i = 0; i < w.insertValues.size(); ++i) {
        if (i) os << ",";
        const IntExpr& e = *w.insertValues[i];
        if (e.kind == IntExpr::Kind::Lit) os << e.text;
        else printSplice(os, e);
      }
      os << ")";
      break;
    case DbWrite::Kind::Update:
      os << "UPDATE " << w.table << " SET " << w.setAttr << " = ";
      printDbExpr(os, *w.setExpr);
      if (w.where) {
        os << " WHERE ";
        printDbCond(os, *w.where);
      }
      break;
    case DbWrite::Kind::Delete:
      os << "DELETE FROM " << w.table;
      if (w.where) {
        os << " WHERE ";
        printDbCond(os, *w.where);
      }
      break;
  }
}

void printBlock(std::ostream& os, const Block& b, int indent);

void printStmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  os << pad;
  switch (s.kind) {
    case Stmt::Kind::IntAssign:
      if (s.declares) os << "int ";
      os << s.var << " = ";
      printIntExpr(os, *s.intExpr);
      os << ";\n";
      break;
    case Stmt::Kind::ListAssign:
      if (s.declares) os << "List<Integer> ";
      os << s.var << " = ";
      if (s.listInit == Stmt::ListInit::Null) os << "null";
      else if (s.listInit == Stmt::ListInit::New) os << "new ArrayList<Integer>()";
      else os << s.listVar;
      os << ";\n";
      break;
    case Stmt::Kind::ScannerRead:
      if (s.declares) os << "int ";
      os << s.var << " = in.nextInt();\n";
      break;
    case Stmt::Kind::Query:
      if (s.declares) os << "ResultSet ";
      os << s.var << " = con.createStatement().executeQuery(\"";
      printSelectInner(os, *s.query);
      os << "\");\n";
      break;
    case Stmt::Kind::RsNextStmt:
      os << s.var << ".next();\n";
      break;
    case Stmt::Kind::ListAdd:
    case Stmt::Kind::ListRemove:
      os << s.var << (s.kind == Stmt::Kind::ListAdd ? ".add(" : ".remove(");
      printIntExpr(os, *s.intExpr);
      os << ");\n";
      break;
    case Stmt::Kind::Write:
      os << "con.createStatement().execute(\"";
      printWriteInner(os, *s.write);
      os << "\");\n";
      break;
    case Stmt::Kind::TryWrite:
      os << "try {\n" << pad << "  con.createStatement().execute(\"";
      printWriteInner(os, *s.write);
      os << "\");\n" << pad << "} catch (SQLException " << s.catchVar << ") {\n";
      printBlock(os, s.handler, indent + 1);
      os << pad << "}\n";
      break;
    case Stmt::Kind::If:
      os << "if (";
      printCond(os, *s.cond);
      os << ") {\n";
      printBlock(os, s.thenBody, indent + 1);
      os << pad << "}";
      if (!s.elseBody.empty()) {
        os << " else {\n";
        printBlock(os, s.elseBody, indent + 1);
        os << pad << "}";
      }
      os << "\n";
      break;
    case Stmt::Kind::While:
      os << "while (";
      printCond(os, *s.cond);
      os << ") {\n";
      printBlock(os, s.thenBody, indent + 1);
      os << pad << "}\n";
      break;
    case Stmt::Kind::Assert:
      os << "assert ";
      printCond(os, *s.cond);
      os << ";\n";
      break;
    case Stmt::Kind::Commit:
      os << "con.commit();\n";
      break;
    case Stmt::Kind::Rollback:
      os << "con.rollback();\n";
      break;
    case Stmt::Kind::Return:
      os << "return " << s.var << ";\n";
      break;
  }
}

void printBlock(std::ostream& os, const Block& b, int indent) {
  for (const auto& s : b) printStmt(os, *s, indent);
}

}  // namespace

std::string print_schema(const Schema& schema) {
  std::ostringstream os;
  for (const auto& t : schema.tables) {
    os << "CREATE TABLE " << t.name << " (\n";
    for (const auto& a : t.attrs) os << "  " << a << " INTEGER NOT NULL,\n";
    os << "  CONSTRAINT " << t.pkName << " PRIMARY KEY (" << t.pk << ")";
    for (const auto& fk : t.fks)
      os << ",\n  CONSTRAINT " << fk.constraintName << " FOREIGN KEY (" << fk.attr
         << ") REFERENCES " << fk.refTable << " (" << fk.refAttr << ")";
    for (const auto& ck : t.checks)
      os << ",\n  CHECK (" << ck.attr << " " << cmp_spelling(ck.op) << " " << ck.bound
         << ")";
    os << "\n);\n";
  }
  return os.str();
}

std::string print_method(const MethodAst& m) {
  std::ostringstream os;
  switch (m.returnType) {
    case ReturnType::Void: os << "void"; break;
    case ReturnType::Int: os << "int"; break;
    case ReturnType::IntList: os << "List<Integer>"; break;
  }
  os << " " << m.name << "(Connection con, Scanner in";
  for (const auto& p : m.listParams) os << ", List<Integer> " << p;
  os << ") throws SQLException {\n";
  printBlock(os, m.body, 1);
  os << "}\n";
  return os.str();
}

std::string print_int_expr(const IntExpr& e) {
  std::ostringstream os;
  printIntExpr(os, e);
  return os.str();
}

std::string print_cond(const Cond& c) {
  std::ostringstream os;
  printCond(os, c);
  return os.str();
}

std::string print_db_write(const DbWrite& w) {
  std::ostringstream os;
  printWriteInner(os, w);
  return os.str();
}

std::string print_select(const SelectQuery& q) {
  std::ostringstream os;
  printSelectInner(os, q);
  return os.str();
}

}  // namespace relsy
