#pragma once

#include <memory>
#include <string>
#include <vector>

#include "relsy/diagnostics.hpp"

namespace relsy {

// ---------------------------------------------------------------------------
// Schema side
// ---------------------------------------------------------------------------

enum class CmpOp { Lt, Eq, Gt };  // the only comparators in the core language

inline const char* cmp_spelling(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Eq: return "=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

struct ForeignKey {
  std::string constraintName;
  std::string attr;      // local attribute holding the reference
  std::string refTable;
  std::string refAttr;   // must be the referenced table's primary key
};

struct CheckConstraint {
  std::string attr;
  CmpOp op;
  std::string bound;     // integer literal as written (kept verbatim)
};

struct TableDef {
  std::string name;
  std::vector<std::string> attrs;  // declaration order; positions are 1-based
  std::string pkName;              // primary-key constraint name
  std::string pk;                  // primary-key attribute
  std::vector<ForeignKey> fks;
  std::vector<CheckConstraint> checks;

  // 1-based attribute position, 0 if absent.
  int attrPos(const std::string& a) const {
    for (size_t i = 0; i < attrs.size(); ++i)
      if (attrs[i] == a) return static_cast<int>(i) + 1;
    return 0;
  }
  bool hasAttr(const std::string& a) const { return attrPos(a) != 0; }
  int pkPos() const { return attrPos(pk); }
  const ForeignKey* fkOn(const std::string& a) const {
    for (const auto& fk : fks)
      if (fk.attr == a) return &fk;
    return nullptr;
  }
};

// An incoming reference: some other (or the same) table's fk points here.
struct IncomingFk {
  std::string fromTable;  // child table
  std::string attr;       // child attribute holding the reference
};

struct Schema {
  std::vector<TableDef> tables;

  const TableDef* table(const std::string& name) const {
    for (const auto& t : tables)
      if (t.name == name) return &t;
    return nullptr;
  }
  // Incoming fks of `name`, in child-table declaration order, then fk order.
  std::vector<IncomingFk> incomingFks(const std::string& name) const {
    std::vector<IncomingFk> out;
    for (const auto& t : tables)
      for (const auto& fk : t.fks)
        if (fk.refTable == name) out.push_back({t.name, fk.attr});
    return out;
  }
};

// ---------------------------------------------------------------------------
// Host-language expressions
// ---------------------------------------------------------------------------

struct IntExpr;
using IntExprPtr = std::shared_ptr<const IntExpr>;

struct IntExpr {
  enum class Kind { Lit, Var, Add, Sub, ListGet, ListSize, RsGetInt };
  Kind kind;
  SourceLoc loc;
  std::string text;      // Lit: digits as written; Var/ListGet/ListSize/RsGetInt: variable
  std::string attr;      // RsGetInt: attribute name
  IntExprPtr lhs, rhs;   // Add/Sub operands; ListGet index in lhs
};

struct Cond;
using CondPtr = std::shared_ptr<const Cond>;

struct Cond {
  enum class Kind { BoolLit, Not, And, Or, Cmp, IsNull, RsNext };
  Kind kind;
  SourceLoc loc;
  bool value = false;   // BoolLit
  CondPtr lhs, rhs;     // Not uses lhs only
  CmpOp op = CmpOp::Eq; // Cmp
  IntExprPtr e1, e2;    // Cmp
  std::string var;      // IsNull: list variable; RsNext: result-set variable
};

// ---------------------------------------------------------------------------
// Embedded SQL
// ---------------------------------------------------------------------------

struct DbIntExpr;
using DbIntExprPtr = std::shared_ptr<const DbIntExpr>;

struct DbIntExpr {
  enum class Kind { Lit, Attr, Add, Sub, Host };
  Kind kind;
  SourceLoc loc;
  std::string text;     // Lit: digits; Attr: attribute name
  DbIntExprPtr lhs, rhs;
  IntExprPtr host;      // spliced host expression
};

struct DbCond;
using DbCondPtr = std::shared_ptr<const DbCond>;

struct DbCond {
  enum class Kind { Cmp, And, Or, Not };
  Kind kind;
  SourceLoc loc;
  std::string attr;     // Cmp: left-hand attribute
  CmpOp op = CmpOp::Eq;
  DbIntExprPtr rhs;     // Cmp
  DbCondPtr c1, c2;     // And/Or; Not uses c1 only
};

struct SelectQuery {
  SourceLoc loc;
  std::vector<std::string> projection;  // attribute names
  std::string table;
  DbCondPtr where;  // null = no WHERE clause
};

struct DbWrite {
  enum class Kind { Insert, Update, Delete };
  Kind kind;
  SourceLoc loc;
  std::string table;
  std::vector<IntExprPtr> insertValues;  // Insert: host expressions, one per attribute
  std::string setAttr;                   // Update
  DbIntExprPtr setExpr;                  // Update
  DbCondPtr where;                       // Update/Delete, null = none
};

// ---------------------------------------------------------------------------
// Statements and methods
// ---------------------------------------------------------------------------

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  enum class Kind {
    IntAssign,    // [int] v = int-expr ;
    ListAssign,   // [List<Integer>] v = list-expr ;
    ScannerRead,  // [int] v = in.nextInt() ;
    Query,        // [ResultSet] v = con.createStatement().executeQuery("...") ;
    RsNextStmt,   // v.next() ;
    ListAdd,      // v.add(e) ;
    ListRemove,   // v.remove(e) ;
    Write,        // con.createStatement().execute("...") ;   (no handler)
    TryWrite,     // try { ...execute("...") ; } catch (SQLException e) { ... }
    If,
    While,
    Assert,
    Commit,
    Rollback,
    Return,
  };
  enum class ListInit { Var, Null, New };

  Kind kind;
  SourceLoc loc;
  bool declares = false;          // leading type was present
  std::string var;                // target / receiver / returned variable
  IntExprPtr intExpr;             // IntAssign value; ListAdd/ListRemove argument
  ListInit listInit = ListInit::Var;
  std::string listVar;            // ListAssign source variable
  std::shared_ptr<const SelectQuery> query;
  std::shared_ptr<const DbWrite> write;  // Write / TryWrite
  Block handler;                  // TryWrite catch body
  std::string catchVar;           // exception variable name
  CondPtr cond;                   // If / While / Assert
  Block thenBody, elseBody;       // If; While keeps its body in thenBody
};

enum class ReturnType { Void, Int, IntList };

struct MethodAst {
  std::string name;
  ReturnType returnType = ReturnType::Void;
  std::vector<std::string> listParams;  // List<Integer> parameters after con, in
  Block body;
};

}  // namespace relsy
