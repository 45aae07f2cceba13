#include "relsy/parser.hpp"

#include <map>
#include <memory>
#include <set>
#include <variant>

#include "relsy/lexer.hpp"

namespace relsy {
namespace {

[[noreturn]] void fail(SourceLoc loc, const std::string& msg) {
  throw ParseError(loc, msg);
}

// ---------------------------------------------------------------------------
// DDL
// ---------------------------------------------------------------------------

class SchemaParser {
 public:
  explicit SchemaParser(std::string_view src) : lx_(src) {}

  Schema run() {
    Schema schema;
    while (lx_.peek().kind != Token::Kind::End) {
      schema.tables.push_back(parseTable());
    }
    resolve(schema);
    return schema;
  }

 private:
  Lexer lx_;

  bool peekKw(std::string_view kw) const {
    const Token& t = lx_.peek();
    return t.kind == Token::Kind::Ident && same_word_ci(t.text, kw);
  }
  void expectKw(std::string_view kw) {
    if (!peekKw(kw)) fail(lx_.loc(), "expected '" + std::string(kw) + "'");
    lx_.next();
  }
  void expectPunct(std::string_view p) {
    if (!lx_.peek().isPunct(p)) fail(lx_.loc(), "expected '" + std::string(p) + "'");
    lx_.next();
  }
  std::string expectIdent(const char* what) {
    const Token& t = lx_.peek();
    if (t.kind != Token::Kind::Ident) fail(t.loc, std::string("expected ") + what);
    return lx_.next().text;
  }
  std::string expectInteger() {
    bool neg = false;
    if (lx_.peek().isPunct("-")) {
      lx_.next();
      neg = true;
    }
    const Token& t = lx_.peek();
    if (t.kind != Token::Kind::Int) fail(t.loc, "expected integer literal");
    std::string digits = lx_.next().text;
    return neg ? "-" + digits : digits;
  }

  CmpOp expectCmp() {
    const Token& t = lx_.peek();
    if (t.isPunct("<")) { lx_.next(); return CmpOp::Lt; }
    if (t.isPunct("=")) { lx_.next(); return CmpOp::Eq; }
    if (t.isPunct(">")) { lx_.next(); return CmpOp::Gt; }
    fail(t.loc, "expected comparison operator (<, =, >)");
  }

  TableDef parseTable() {
    expectKw("CREATE");
    expectKw("TABLE");
    TableDef td;
    SourceLoc tloc = lx_.loc();
    td.name = expectIdent("table name");
    expectPunct("(");
    // Attribute declarations: `name INTEGER NOT NULL ,` each.
    while (true) {
      if (lx_.peek().kind != Token::Kind::Ident) break;
      if (peekKw("CONSTRAINT") || peekKw("CHECK")) break;
      std::string attr = expectIdent("attribute name");
      expectKw("INTEGER");
      expectKw("NOT");
      expectKw("NULL");
      expectPunct(",");
      for (const auto& a : td.attrs)
        if (a == attr) fail(tloc, "duplicate attribute '" + attr + "' in table '" + td.name + "'");
      td.attrs.push_back(attr);
    }
    if (td.attrs.empty()) fail(tloc, "table '" + td.name + "' has no attributes");
    // Primary key (exactly one, first constraint).
    expectKw("CONSTRAINT");
    td.pkName = expectIdent("constraint name");
    expectKw("PRIMARY");
    expectKw("KEY");
    expectPunct("(");
    SourceLoc pkloc = lx_.loc();
    td.pk = expectIdent("attribute name");
    expectPunct(")");
    if (!td.hasAttr(td.pk))
      fail(pkloc, "primary key '" + td.pk + "' is not an attribute of '" + td.name + "'");
    // Foreign keys, then checks.
    while (lx_.peek().isPunct(",")) {
      lx_.next();
      if (peekKw("CONSTRAINT")) {
        lx_.next();
        ForeignKey fk;
        fk.constraintName = expectIdent("constraint name");
        expectKw("FOREIGN");
        expectKw("KEY");
        expectPunct("(");
        SourceLoc floc = lx_.loc();
        fk.attr = expectIdent("attribute name");
        expectPunct(")");
        expectKw("REFERENCES");
        fk.refTable = expectIdent("table name");
        expectPunct("(");
        fk.refAttr = expectIdent("attribute name");
        expectPunct(")");
        if (!td.hasAttr(fk.attr))
          fail(floc, "foreign key attribute '" + fk.attr + "' is not an attribute of '" +
                         td.name + "'");
        td.fks.push_back(fk);
      } else if (peekKw("CHECK")) {
        lx_.next();
        expectPunct("(");
        CheckConstraint ck;
        SourceLoc cloc = lx_.loc();
        ck.attr = expectIdent("attribute name");
        ck.op = expectCmp();
        ck.bound = expectInteger();
        expectPunct(")");
        if (!td.hasAttr(ck.attr))
          fail(cloc, "check constraint on unknown attribute '" + ck.attr + "'");
        td.checks.push_back(ck);
      } else {
        fail(lx_.loc(), "expected CONSTRAINT or CHECK");
      }
    }
    expectPunct(")");
    expectPunct(";");
    return td;
  }

  // Cross-table checks once every table is known (allows forward references).
  static void resolve(const Schema& schema) {
    std::set<std::string> seen;
    for (const auto& t : schema.tables) {
      if (!seen.insert(t.name).second)
        fail({}, "duplicate table '" + t.name + "'");
    }
    for (const auto& t : schema.tables) {
      for (const auto& fk : t.fks) {
        const TableDef* ref = schema.table(fk.refTable);
        if (!ref)
          fail({}, "foreign key '" + fk.constraintName + "' references unknown table '" +
                       fk.refTable + "'");
        if (ref->pk != fk.refAttr)
          fail({}, "foreign key '" + fk.constraintName + "' must reference the primary key of '" +
                       fk.refTable + "' ('" + ref->pk + "'), not '" + fk.refAttr + "'");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// SQL statements embedded in strings
// ---------------------------------------------------------------------------

// A reassembled SQL string: literal text pieces interleaved with spliced host
// expressions.  Adjacent text pieces are merged, empty ones dropped.
struct SqlTemplate {
  struct Piece {
    std::string text;      // empty => spliced expression
    IntExprPtr hole;
    SourceLoc loc;
  };
  std::vector<Piece> pieces;
};

class SqlParser {
 public:
  SqlParser(const SqlTemplate& tpl, SourceLoc callLoc) : callLoc_(callLoc) {
    for (const auto& p : tpl.pieces) {
      if (p.hole) {
        toks_.push_back(SqlTok{Token{Token::Kind::End, "", p.loc}, p.hole});
        continue;
      }
      try {
        Lexer lx(p.text);
        while (lx.peek().kind != Token::Kind::End) {
          Token t = lx.next();
          t.loc = p.loc;  // report positions at the enclosing string literal
          toks_.push_back(SqlTok{t, nullptr});
        }
      } catch (const ParseError& e) {
        fail(p.loc, std::string("in SQL string: ") + e.what());
      }
    }
    toks_.push_back(SqlTok{Token{Token::Kind::End, "", callLoc}, nullptr});
  }

  // Entry point for executeQuery(...) arguments.
  SelectQuery parseSelect() {
    expectKw("SELECT");
    SelectQuery q;
    q.loc = callLoc_;
    q.projection.push_back(expectIdent("attribute name"));
    while (peekPunct(",")) {
      next();
      q.projection.push_back(expectIdent("attribute name"));
    }
    expectKw("FROM");
    q.table = expectIdent("table name");
    if (peekKw("WHERE")) {
      next();
      q.where = parseCond();
    }
    expectEnd();
    return q;
  }

  // Entry point for execute(...) arguments.
  DbWrite parseWrite() {
    DbWrite w;
    w.loc = callLoc_;
    if (peekKw("INSERT")) {
      next();
      expectKw("INTO");
      w.kind = DbWrite::Kind::Insert;
      w.table = expectIdent("table name");
      expectKw("VALUES");
      expectPunct("(");
      w.insertValues.push_back(parseValueExpr());
      while (peekPunct(",")) {
        next();
        w.insertValues.push_back(parseValueExpr());
      }
      expectPunct(")");
    } else if (peekKw("UPDATE")) {
      next();
      w.kind = DbWrite::Kind::Update;
      w.table = expectIdent("table name");
      expectKw("SET");
      w.setAttr = expectIdent("attribute name");
      expectPunct("=");
      w.setExpr = parseDbExpr();
      if (peekKw("WHERE")) {
        next();
        w.where = parseCond();
      }
    } else if (peekKw("DELETE")) {
      next();
      expectKw("FROM");
      w.kind = DbWrite::Kind::Delete;
      w.table = expectIdent("table name");
      if (peekKw("WHERE")) {
        next();
        w.where = parseCond();
      }
    } else {
      fail(loc(), "expected INSERT, UPDATE or DELETE");
    }
    expectEnd();
    return w;
  }

 private:
  struct SqlTok {
    Token tok;
    IntExprPtr hole;  // non-null: a spliced host expression
  };
  std::vector<SqlTok> toks_;
  size_t pos_ = 0;
  SourceLoc callLoc_;

  const SqlTok& cur() const { return toks_[std::min(pos_, toks_.size() - 1)]; }
  void next() { if (pos_ + 1 < toks_.size()) ++pos_; }
  SourceLoc loc() const { return cur().tok.loc; }
  bool atHole() const { return cur().hole != nullptr; }
  bool peekKw(std::string_view kw) const {
    return !atHole() && cur().tok.kind == Token::Kind::Ident &&
           same_word_ci(cur().tok.text, kw);
  }
  bool peekPunct(std::string_view p) const { return !atHole() && cur().tok.isPunct(p); }
  void expectKw(std::string_view kw) {
    if (!peekKw(kw)) fail(loc(), "expected '" + std::string(kw) + "' in SQL");
    next();
  }
  void expectPunct(std::string_view p) {
    if (!peekPunct(p)) fail(loc(), "expected '" + std::string(p) + "' in SQL");
    next();
  }
  void expectEnd() {
    if (atHole())
      fail(loc(), "spliced host expression is only allowed in a scalar value position");
    if (cur().tok.kind != Token::Kind::End) fail(loc(), "trailing tokens after SQL statement");
  }
  std::string expectIdent(const char* what) {
    if (atHole())
      fail(loc(), "spliced host expression is only allowed in a scalar value position");
    if (cur().tok.kind != Token::Kind::Ident)
      fail(loc(), std::string("expected ") + what + " in SQL");
    // Reserved words are not identifiers.
    for (const char* kw : {"SELECT", "FROM", "WHERE", "AND", "OR", "NOT", "INSERT",
                           "INTO", "VALUES", "UPDATE", "SET", "DELETE"})
      if (same_word_ci(cur().tok.text, kw))
        fail(loc(), std::string("expected ") + what + " in SQL, found keyword");
    std::string s = cur().tok.text;
    next();
    return s;
  }

  // INSERT value: a host-side integer expression, either spliced or built from
  // literals.  Bare identifiers are not host variables here; they must be
  // spliced in via string concatenation.
  IntExprPtr parseValueExpr() { return parseValueAdd(); }
  IntExprPtr parseValueAdd() {
    IntExprPtr e = parseValuePrimary();
    while (peekPunct("+") || peekPunct("-")) {
      bool add = cur().tok.text == "+";
      SourceLoc l = loc();
      next();
      auto n = std::make_shared<IntExpr>();
      n->kind = add ? IntExpr::Kind::Add : IntExpr::Kind::Sub;
      n->loc = l;
      n->lhs = e;
      n->rhs = parseValuePrimary();
      e = n;
    }
    return e;
  }
  IntExprPtr parseValuePrimary() {
    if (atHole()) {
      IntExprPtr h = cur().hole;
      next();
      return h;
    }
    if (peekPunct("(")) {
      next();
      IntExprPtr e = parseValueAdd();
      expectPunct(")");
      return e;
    }
    bool neg = false;
    SourceLoc l = loc();
    if (peekPunct("-")) {
      next();
      neg = true;
    }
    if (!atHole() && cur().tok.kind == Token::Kind::Int) {
      auto n = std::make_shared<IntExpr>();
      n->kind = IntExpr::Kind::Lit;
      n->loc = l;
      n->text = (neg ? "-" : "") + cur().tok.text;
      next();
      return n;
    }
    fail(l, "expected integer literal or spliced host expression in VALUES");
  }

  // SQL scalar expression: attributes, literals, splices, + and -.
  DbIntExprPtr parseDbExpr() {
    DbIntExprPtr e = parseDbPrimary();
    while (peekPunct("+") || peekPunct("-")) {
      bool add = cur().tok.text == "+";
      SourceLoc l = loc();
      next();
      auto n = std::make_shared<DbIntExpr>();
      n->kind = add ? DbIntExpr::Kind::Add : DbIntExpr::Kind::Sub;
      n->loc = l;
      n->lhs = e;
      n->rhs = parseDbPrimary();
      e = n;
    }
    return e;
  }
  DbIntExprPtr parseDbPrimary() {
    auto n = std::make_shared<DbIntExpr>();
    n->loc = loc();
    if (atHole()) {
      n->kind = DbIntExpr::Kind::Host;
      n->host = cur().hole;
      next();
      return n;
    }
    if (peekPunct("(")) {
      next();
      DbIntExprPtr e = parseDbExpr();
      expectPunct(")");
      return e;
    }
    if (peekPunct("-")) {
      next();
      if (atHole() || cur().tok.kind != Token::Kind::Int)
        fail(n->loc, "expected integer literal after '-' in SQL");
      n->kind = DbIntExpr::Kind::Lit;
      n->text = "-" + cur().tok.text;
      next();
      return n;
    }
    if (cur().tok.kind == Token::Kind::Int) {
      n->kind = DbIntExpr::Kind::Lit;
      n->text = cur().tok.text;
      next();
      return n;
    }
    if (cur().tok.kind == Token::Kind::Ident) {
      n->kind = DbIntExpr::Kind::Attr;
      n->text = expectIdent("attribute name");
      return n;
    }
    fail(n->loc, "expected SQL scalar expression");
  }

  // WHERE condition: comparisons `attr op expr` combined with AND/OR/NOT.
  DbCondPtr parseCond() { return parseOr(); }
  DbCondPtr parseOr() {
    DbCondPtr c = parseAnd();
    while (peekKw("OR")) {
      SourceLoc l = loc();
      next();
      auto n = std::make_shared<DbCond>();
      n->kind = DbCond::Kind::Or;
      n->loc = l;
      n->c1 = c;
      n->c2 = parseAnd();
      c = n;
    }
    return c;
  }
  DbCondPtr parseAnd() {
    DbCondPtr c = parseUnary();
    while (peekKw("AND")) {
      SourceLoc l = loc();
      next();
      auto n = std::make_shared<DbCond>();
      n->kind = DbCond::Kind::And;
      n->loc = l;
      n->c1 = c;
      n->c2 = parseUnary();
      c = n;
    }
    return c;
  }
  DbCondPtr parseUnary() {
    if (peekKw("NOT")) {
      SourceLoc l = loc();
      next();
      auto n = std::make_shared<DbCond>();
      n->kind = DbCond::Kind::Not;
      n->loc = l;
      n->c1 = parseUnary();
      return n;
    }
    if (peekPunct("(")) {
      next();
      DbCondPtr c = parseCond();
      expectPunct(")");
      return c;
    }
    auto n = std::make_shared<DbCond>();
    n->kind = DbCond::Kind::Cmp;
    n->loc = loc();
    n->attr = expectIdent("attribute name");
    if (peekPunct("<")) { n->op = CmpOp::Lt; }
    else if (peekPunct("=")) { n->op = CmpOp::Eq; }
    else if (peekPunct(">")) { n->op = CmpOp::Gt; }
    else fail(loc(), "expected comparison operator (<, =, >) in SQL");
    next();
    n->rhs = parseDbExpr();
    return n;
  }
};

// ---------------------------------------------------------------------------
// Method bodies
// ---------------------------------------------------------------------------

enum class VarKind { Int, List, Rs };

class MethodParser {
 public:
  explicit MethodParser(std::string_view src) : lx_(src) {}

  MethodAst run() {
    MethodAst m;
    m.returnType = parseReturnType();
    m.name = expectIdent("method name");
    expectPunct("(");
    expectWord("Connection");
    expectWord("con");
    expectPunct(",");
    expectWord("Scanner");
    expectWord("in");
    while (lx_.peek().isPunct(",")) {
      lx_.next();
      expectListType();
      SourceLoc l = lx_.loc();
      std::string p = expectIdent("parameter name");
      for (const auto& q : m.listParams)
        if (q == p) fail(l, "duplicate parameter '" + p + "'");
      m.listParams.push_back(p);
      kinds_[p] = VarKind::List;
    }
    expectPunct(")");
    expectWord("throws");
    expectWord("SQLException");
    expectPunct("{");
    m.body = parseStmts("}");
    expectPunct("}");
    if (lx_.peek().kind != Token::Kind::End)
      fail(lx_.loc(), "trailing tokens after method body");
    return m;
  }

 private:
  Lexer lx_;
  // Declared kinds seen so far; used only to classify `x = y;` assignments.
  // Real scope checking happens in validate().
  std::map<std::string, VarKind> kinds_;

  bool peekWord(std::string_view w, size_t k = 0) const {
    const Token& t = lx_.peek(k);
    return t.kind == Token::Kind::Ident && t.text == w;
  }
  void expectWord(std::string_view w) {
    if (!peekWord(w)) fail(lx_.loc(), "expected '" + std::string(w) + "'");
    lx_.next();
  }
  void expectPunct(std::string_view p) {
    if (!lx_.peek().isPunct(p)) fail(lx_.loc(), "expected '" + std::string(p) + "'");
    lx_.next();
  }
  std::string expectIdent(const char* what) {
    const Token& t = lx_.peek();
    if (t.kind != Token::Kind::Ident) fail(t.loc, std::string("expected ") + what);
    return lx_.next().text;
  }

  ReturnType parseReturnType() {
    if (peekWord("void")) { lx_.next(); return ReturnType::Void; }
    if (peekWord("int")) { lx_.next(); return ReturnType::Int; }
    if (peekWord("List")) { expectListType(); return ReturnType::IntList; }
    fail(lx_.loc(), "expected return type (void, int or List<Integer>)");
  }
  void expectListType() {
    expectWord("List");
    expectPunct("<");
    expectWord("Integer");
    expectPunct(">");
  }

  Block parseStmts(std::string_view closer) {
    Block b;
    while (true) {
      while (lx_.peek().isPunct(";")) lx_.next();  // tolerate stray separators
      if (lx_.peek().isPunct(closer) || lx_.peek().kind == Token::Kind::End) break;
      b.push_back(parseStmt());
    }
    return b;
  }

  Block parseBlockOrSingle() {
    if (lx_.peek().isPunct("{")) {
      lx_.next();
      Block b = parseStmts("}");
      expectPunct("}");
      return b;
    }
    Block b;
    b.push_back(parseStmt());
    return b;
  }

  StmtPtr parseStmt() {
    SourceLoc l = lx_.loc();
    if (peekWord("if")) return parseIf();
    if (peekWord("while")) return parseWhile();
    if (peekWord("assert")) return parseAssert();
    if (peekWord("return")) {
      lx_.next();
      auto s = std::make_shared<Stmt>();
      s->kind = Stmt::Kind::Return;
      s->loc = l;
      s->var = expectIdent("variable name");
      expectPunct(";");
      return s;
    }
    if (peekWord("try")) return parseTry();
    if (peekWord("int")) {
      lx_.next();
      std::string v = expectIdent("variable name");
      expectPunct("=");
      StmtPtr s = parseIntRhs(l, v, /*declares=*/true);
      expectPunct(";");
      return s;
    }
    if (peekWord("List")) {
      expectListType();
      std::string v = expectIdent("variable name");
      expectPunct("=");
      StmtPtr s = parseListRhs(l, v, /*declares=*/true);
      expectPunct(";");
      return s;
    }
    if (peekWord("ResultSet")) {
      lx_.next();
      std::string v = expectIdent("variable name");
      expectPunct("=");
      StmtPtr s = parseQueryRhs(l, v, /*declares=*/true);
      expectPunct(";");
      return s;
    }
    if (peekWord("con") && lx_.peek(1).isPunct(".")) return parseConCall();
    // Remaining forms start with a plain identifier.
    if (lx_.peek().kind == Token::Kind::Ident) {
      std::string v = expectIdent("variable name");
      if (lx_.peek().isPunct("=")) {
        lx_.next();
        StmtPtr s = parseAssignRhs(l, v);
        expectPunct(";");
        return s;
      }
      if (lx_.peek().isPunct(".")) {
        lx_.next();
        std::string meth = expectIdent("method name");
        expectPunct("(");
        auto s = std::make_shared<Stmt>();
        s->loc = l;
        s->var = v;
        if (meth == "add" || meth == "remove") {
          s->kind = meth == "add" ? Stmt::Kind::ListAdd : Stmt::Kind::ListRemove;
          s->intExpr = parseIntExpr();
          expectPunct(")");
        } else if (meth == "next") {
          s->kind = Stmt::Kind::RsNextStmt;
          if (!lx_.peek().isPunct(")"))
            fail(lx_.loc(), "next() takes no argument");
          lx_.next();
        } else {
          fail(l, "unsupported method call '" + meth + "'");
        }
        expectPunct(";");
        return s;
      }
      fail(lx_.loc(), "expected '=' or '.' after identifier");
    }
    fail(l, "expected statement");
  }

  StmtPtr parseIf() {
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::If;
    s->loc = lx_.loc();
    lx_.next();
    expectPunct("(");
    s->cond = parseCond();
    expectPunct(")");
    s->thenBody = parseBlockOrSingle();
    if (peekWord("else")) {
      lx_.next();
      s->elseBody = parseBlockOrSingle();
    }
    return s;
  }

  StmtPtr parseWhile() {
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::While;
    s->loc = lx_.loc();
    lx_.next();
    expectPunct("(");
    s->cond = parseCond();
    expectPunct(")");
    s->thenBody = parseBlockOrSingle();
    return s;
  }

  StmtPtr parseAssert() {
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Assert;
    s->loc = lx_.loc();
    lx_.next();
    s->cond = parseCond();
    expectPunct(";");
    return s;
  }

  // try { con.createStatement().execute("..."); } catch (SQLException e) { ... }
  StmtPtr parseTry() {
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::TryWrite;
    s->loc = lx_.loc();
    lx_.next();
    expectPunct("{");
    expectWord("con");
    s->write = std::make_shared<DbWrite>(parseExecuteCall(/*query=*/false).write);
    expectPunct(";");
    expectPunct("}");
    expectWord("catch");
    expectPunct("(");
    expectWord("SQLException");
    s->catchVar = expectIdent("exception variable");
    expectPunct(")");
    expectPunct("{");
    s->handler = parseStmts("}");
    expectPunct("}");
    return s;
  }

  // con.commit(); | con.rollback(); | con.createStatement().execute("...");
  StmtPtr parseConCall() {
    auto s = std::make_shared<Stmt>();
    s->loc = lx_.loc();
    expectWord("con");
    expectPunct(".");
    if (peekWord("commit") || peekWord("rollback")) {
      s->kind = peekWord("commit") ? Stmt::Kind::Commit : Stmt::Kind::Rollback;
      lx_.next();
      expectPunct("(");
      expectPunct(")");
      expectPunct(";");
      return s;
    }
    auto call = parseExecuteCallAfterCon(/*query=*/false);
    s->kind = Stmt::Kind::Write;
    s->write = std::make_shared<DbWrite>(call.write);
    expectPunct(";");
    return s;
  }

  struct ExecuteCall {
    DbWrite write;
    SelectQuery select;
  };

  ExecuteCall parseExecuteCall(bool query) {
    expectPunct(".");
    return parseExecuteCallAfterConDot(query);
  }
  ExecuteCall parseExecuteCallAfterCon(bool query) {
    return parseExecuteCallAfterConDot(query);
  }
  // Parses createStatement().execute*("...") with `con.` already consumed.
  ExecuteCall parseExecuteCallAfterConDot(bool query) {
    SourceLoc l = lx_.loc();
    expectWord("createStatement");
    expectPunct("(");
    expectPunct(")");
    expectPunct(".");
    bool isQuery = peekWord("executeQuery");
    if (isQuery) lx_.next();
    else expectWord("execute");
    if (query != isQuery)
      fail(l, isQuery ? "executeQuery used as a statement; assign it to a ResultSet"
                      : "execute cannot produce a ResultSet; use executeQuery");
    expectPunct("(");
    SqlTemplate tpl = parseSqlConcat();
    expectPunct(")");
    SqlParser sp(tpl, l);
    ExecuteCall out;
    if (isQuery) out.select = sp.parseSelect();
    else out.write = sp.parseWrite();
    return out;
  }

  // The argument of execute/executeQuery: string literals and host
  // expressions joined by '+', following Java's left-associative
  // concatenation (each non-string operand is a primary expression).
  SqlTemplate parseSqlConcat() {
    SqlTemplate tpl;
    while (true) {
      SourceLoc l = lx_.loc();
      if (lx_.peek().kind == Token::Kind::Str) {
        std::string text = lx_.next().text;
        if (!tpl.pieces.empty() && !tpl.pieces.back().hole)
          tpl.pieces.back().text += text;  // merge adjacent literals
        else if (!text.empty())
          tpl.pieces.push_back({text, nullptr, l});
      } else {
        tpl.pieces.push_back({"", parseIntPrimary(), l});
      }
      if (lx_.peek().isPunct("+")) lx_.next();
      else break;
    }
    if (tpl.pieces.empty()) fail(lx_.loc(), "empty SQL string");
    return tpl;
  }

  // RHS of `[int] v = ...`.
  StmtPtr parseIntRhs(SourceLoc l, const std::string& v, bool declares) {
    kinds_[v] = VarKind::Int;
    if (peekWord("in") && lx_.peek(1).isPunct(".")) {
      lx_.next();
      lx_.next();
      expectWord("nextInt");
      expectPunct("(");
      expectPunct(")");
      auto s = std::make_shared<Stmt>();
      s->kind = Stmt::Kind::ScannerRead;
      s->loc = l;
      s->declares = declares;
      s->var = v;
      return s;
    }
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::IntAssign;
    s->loc = l;
    s->declares = declares;
    s->var = v;
    s->intExpr = parseIntExpr();
    return s;
  }

  StmtPtr parseListRhs(SourceLoc l, const std::string& v, bool declares) {
    kinds_[v] = VarKind::List;
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::ListAssign;
    s->loc = l;
    s->declares = declares;
    s->var = v;
    if (peekWord("null")) {
      lx_.next();
      s->listInit = Stmt::ListInit::Null;
    } else if (peekWord("new")) {
      lx_.next();
      expectWord("ArrayList");
      expectPunct("<");
      expectWord("Integer");
      expectPunct(">");
      expectPunct("(");
      expectPunct(")");
      s->listInit = Stmt::ListInit::New;
    } else {
      s->listInit = Stmt::ListInit::Var;
      s->listVar = expectIdent("list variable");
    }
    return s;
  }

  StmtPtr parseQueryRhs(SourceLoc l, const std::string& v, bool declares) {
    kinds_[v] = VarKind::Rs;
    expectWord("con");
    auto call = parseExecuteCall(/*query=*/true);
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Query;
    s->loc = l;
    s->declares = declares;
    s->var = v;
    s->query = std::make_shared<SelectQuery>(call.select);
    return s;
  }

  // `v = ...;` without a leading type: classify by RHS shape, falling back to
  // the declared kind for plain variable copies.
  StmtPtr parseAssignRhs(SourceLoc l, const std::string& v) {
    if (peekWord("in") && lx_.peek(1).isPunct("."))
      return parseIntRhs(l, v, /*declares=*/false);
    if (peekWord("con") && lx_.peek(1).isPunct("."))
      return parseQueryRhs(l, v, /*declares=*/false);
    if (peekWord("null") || peekWord("new"))
      return parseListRhs(l, v, /*declares=*/false);
    if (lx_.peek().kind == Token::Kind::Ident && lx_.peek(1).isPunct(";")) {
      const std::string& rhs = lx_.peek().text;
      auto kv = kinds_.find(v);
      auto kr = kinds_.find(rhs);
      bool listish = (kv != kinds_.end() && kv->second == VarKind::List) ||
                     (kr != kinds_.end() && kr->second == VarKind::List);
      if (listish) return parseListRhs(l, v, /*declares=*/false);
    }
    return parseIntRhs(l, v, /*declares=*/false);
  }

  // ---- expressions ----

  IntExprPtr parseIntExpr() {
    IntExprPtr e = parseIntPrimary();
    while (lx_.peek().isPunct("+") || lx_.peek().isPunct("-")) {
      bool add = lx_.peek().text == "+";
      SourceLoc l = lx_.loc();
      lx_.next();
      auto n = std::make_shared<IntExpr>();
      n->kind = add ? IntExpr::Kind::Add : IntExpr::Kind::Sub;
      n->loc = l;
      n->lhs = e;
      n->rhs = parseIntPrimary();
      e = n;
    }
    return e;
  }

  IntExprPtr parseIntPrimary() {
    SourceLoc l = lx_.loc();
    auto n = std::make_shared<IntExpr>();
    n->loc = l;
    if (lx_.peek().kind == Token::Kind::Int) {
      n->kind = IntExpr::Kind::Lit;
      n->text = lx_.next().text;
      return n;
    }
    if (lx_.peek().isPunct("-") && lx_.peek(1).kind == Token::Kind::Int) {
      lx_.next();
      n->kind = IntExpr::Kind::Lit;
      n->text = "-" + lx_.next().text;
      return n;
    }
    if (lx_.peek().isPunct("(")) {
      lx_.next();
      IntExprPtr e = parseIntExpr();
      expectPunct(")");
      return e;
    }
    if (lx_.peek().kind == Token::Kind::Ident) {
      std::string v = expectIdent("variable name");
      if (!lx_.peek().isPunct(".")) {
        n->kind = IntExpr::Kind::Var;
        n->text = v;
        return n;
      }
      lx_.next();
      std::string meth = expectIdent("method name");
      n->text = v;
      if (meth == "get") {
        n->kind = IntExpr::Kind::ListGet;
        expectPunct("(");
        n->lhs = parseIntExpr();
        expectPunct(")");
        return n;
      }
      if (meth == "size") {
        n->kind = IntExpr::Kind::ListSize;
        expectPunct("(");
        expectPunct(")");
        return n;
      }
      if (meth == "getInt") {
        n->kind = IntExpr::Kind::RsGetInt;
        expectPunct("(");
        if (lx_.peek().kind != Token::Kind::Str)
          fail(lx_.loc(), "getInt expects a string attribute name");
        n->attr = lx_.next().text;
        expectPunct(")");
        return n;
      }
      fail(l, "unsupported method '" + meth + "' in expression");
    }
    fail(l, "expected integer expression");
  }

  // ---- conditions ----

  CondPtr parseCond() { return parseCondOr(); }
  CondPtr parseCondOr() {
    CondPtr c = parseCondAnd();
    while (lx_.peek().isPunct("|")) {
      SourceLoc l = lx_.loc();
      lx_.next();
      auto n = std::make_shared<Cond>();
      n->kind = Cond::Kind::Or;
      n->loc = l;
      n->lhs = c;
      n->rhs = parseCondAnd();
      c = n;
    }
    return c;
  }
  CondPtr parseCondAnd() {
    CondPtr c = parseCondUnary();
    while (lx_.peek().isPunct("&")) {
      SourceLoc l = lx_.loc();
      lx_.next();
      auto n = std::make_shared<Cond>();
      n->kind = Cond::Kind::And;
      n->loc = l;
      n->lhs = c;
      n->rhs = parseCondUnary();
      c = n;
    }
    return c;
  }
  CondPtr parseCondUnary() {
    SourceLoc l = lx_.loc();
    if (lx_.peek().isPunct("!")) {
      lx_.next();
      auto n = std::make_shared<Cond>();
      n->kind = Cond::Kind::Not;
      n->loc = l;
      n->lhs = parseCondUnary();
      return n;
    }
    if (peekWord("true") || peekWord("false")) {
      auto n = std::make_shared<Cond>();
      n->kind = Cond::Kind::BoolLit;
      n->loc = l;
      n->value = peekWord("true");
      lx_.next();
      return n;
    }
    // Try a comparison first; backtrack if the tokens do not form one.
    size_t m = lx_.mark();
    try {
      IntExprPtr e1 = parseIntExpr();
      CmpOp op;
      if (lx_.peek().isPunct("<")) op = CmpOp::Lt;
      else if (lx_.peek().isPunct(">")) op = CmpOp::Gt;
      else if (lx_.peek().isPunct("==")) op = CmpOp::Eq;
      else throw ParseError(lx_.loc(), "");
      lx_.next();
      auto n = std::make_shared<Cond>();
      n->loc = l;
      if (op == CmpOp::Eq && peekWord("null")) {
        lx_.next();
        if (e1->kind != IntExpr::Kind::Var)
          fail(l, "only a variable can be compared to null");
        n->kind = Cond::Kind::IsNull;
        n->var = e1->text;
        return n;
      }
      n->kind = Cond::Kind::Cmp;
      n->op = op;
      n->e1 = e1;
      n->e2 = parseIntExpr();
      return n;
    } catch (const ParseError&) {
      lx_.reset(m);
    }
    // rs.next() used as a condition.
    if (lx_.peek().kind == Token::Kind::Ident && lx_.peek(1).isPunct(".") &&
        peekWord("next", 2)) {
      auto n = std::make_shared<Cond>();
      n->kind = Cond::Kind::RsNext;
      n->loc = l;
      n->var = expectIdent("variable name");
      expectPunct(".");
      expectWord("next");
      expectPunct("(");
      if (!lx_.peek().isPunct(")"))
        fail(lx_.loc(), "next() takes no argument");
      lx_.next();
      return n;
    }
    if (lx_.peek().isPunct("(")) {
      lx_.next();
      CondPtr c = parseCond();
      expectPunct(")");
      return c;
    }
    fail(l, "expected condition");
  }
};

}  // namespace

Schema parse_schema(std::string_view src) { return SchemaParser(src).run(); }

MethodAst parse_method(std::string_view src) { return MethodParser(src).run(); }

}  // namespace relsy
