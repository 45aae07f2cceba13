#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "relsy/integer.hpp"

namespace relsy::smt {

// The sorts appearing in emitted constraint systems: Bool, Int, one
// uninterpreted sort per table, the BoundedList record and Int->Int arrays.
struct Sort {
  enum class Kind { Bool, Int, Row, BoundedList, IntArray };
  Kind kind = Kind::Int;
  std::string row;  // table sort name when kind == Row

  static Sort boolSort() { return {Kind::Bool, {}}; }
  static Sort intSort() { return {Kind::Int, {}}; }
  static Sort rowSort(std::string table) { return {Kind::Row, std::move(table)}; }
  static Sort boundedList() { return {Kind::BoundedList, {}}; }
  static Sort intArray() { return {Kind::IntArray, {}}; }

  std::string name() const {
    switch (kind) {
      case Kind::Bool: return "Bool";
      case Kind::Int: return "Int";
      case Kind::Row: return row;
      case Kind::BoundedList: return "BoundedList";
      case Kind::IntArray: return "(Array Int Int)";
    }
    return "?";
  }
  bool operator==(const Sort&) const = default;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;
using Binder = std::pair<std::string, Sort>;

// Immutable term tree.  Applications keep the head symbol as text; there is
// deliberately no typing here — well-sortedness is the emitter's job and the
// external solver re-checks it.
struct Term {
  enum class Kind { IntLit, BoolLit, Sym, App, Forall, Exists };
  Kind kind;
  Integer num;                  // IntLit
  bool b = false;               // BoolLit
  std::string head;             // Sym name / App head
  std::vector<TermPtr> args;    // App
  std::vector<Binder> binders;  // quantifiers
  TermPtr body;                 // quantifiers
  TermPtr pattern;              // optional :pattern term on quantifiers
};

inline TermPtr mkInt(Integer v) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::IntLit;
  t->num = std::move(v);
  return t;
}
inline TermPtr mkInt(long v) { return mkInt(Integer(v)); }

inline TermPtr mkBool(bool b) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::BoolLit;
  t->b = b;
  return t;
}

inline TermPtr mkSym(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Sym;
  t->head = std::move(name);
  return t;
}

inline TermPtr mkApp(std::string head, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->head = std::move(head);
  t->args = std::move(args);
  return t;
}
inline TermPtr mkApp(std::string head, TermPtr a) { return mkApp(std::move(head), std::vector{std::move(a)}); }
inline TermPtr mkApp(std::string head, TermPtr a, TermPtr b) {
  return mkApp(std::move(head), std::vector{std::move(a), std::move(b)});
}

// not with double-negation elimination: not(not(x)) folds to x, so a branch
// taking the else of `if (!c)` asserts c directly.
inline TermPtr mkNot(TermPtr t) {
  if (t->kind == Term::Kind::App && t->head == "not" && t->args.size() == 1) return t->args[0];
  return mkApp("not", std::move(t));
}

inline TermPtr mkAnd(TermPtr a, TermPtr b) { return mkApp("and", std::move(a), std::move(b)); }
inline TermPtr mkOr(TermPtr a, TermPtr b) { return mkApp("or", std::move(a), std::move(b)); }
inline TermPtr mkEq(TermPtr a, TermPtr b) { return mkApp("=", std::move(a), std::move(b)); }
inline TermPtr mkImp(TermPtr a, TermPtr b) { return mkApp("=>", std::move(a), std::move(b)); }

// Left-associated binary conjunction/disjunction chains, matching the paper's
// rendering of n-ary combinations: (and (and a b) c).
inline TermPtr conjoin(std::vector<TermPtr> ts) {
  TermPtr acc = ts.at(0);
  for (size_t i = 1; i < ts.size(); ++i) acc = mkAnd(acc, ts[i]);
  return acc;
}
inline TermPtr disjoin(std::vector<TermPtr> ts) {
  TermPtr acc = ts.at(0);
  for (size_t i = 1; i < ts.size(); ++i) acc = mkOr(acc, ts[i]);
  return acc;
}

inline TermPtr mkQuant(Term::Kind k, std::vector<Binder> binders, TermPtr body,
                       TermPtr pattern = nullptr) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->binders = std::move(binders);
  t->body = std::move(body);
  t->pattern = std::move(pattern);
  return t;
}
inline TermPtr mkForall(std::vector<Binder> binders, TermPtr body, TermPtr pattern = nullptr) {
  return mkQuant(Term::Kind::Forall, std::move(binders), std::move(body), std::move(pattern));
}
inline TermPtr mkExists(std::vector<Binder> binders, TermPtr body) {
  return mkQuant(Term::Kind::Exists, std::move(binders), std::move(body));
}

inline bool term_equal(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Term::Kind::IntLit: return a.num == b.num;
    case Term::Kind::BoolLit: return a.b == b.b;
    case Term::Kind::Sym: return a.head == b.head;
    case Term::Kind::App: {
      if (a.head != b.head || a.args.size() != b.args.size()) return false;
      for (size_t i = 0; i < a.args.size(); ++i)
        if (!term_equal(*a.args[i], *b.args[i])) return false;
      return true;
    }
    case Term::Kind::Forall:
    case Term::Kind::Exists: {
      if (a.binders != b.binders) return false;
      if (static_cast<bool>(a.pattern) != static_cast<bool>(b.pattern)) return false;
      if (a.pattern && !term_equal(*a.pattern, *b.pattern)) return false;
      return term_equal(*a.body, *b.body);
    }
  }
  return false;
}
inline bool term_equal(const TermPtr& a, const TermPtr& b) { return term_equal(*a, *b); }

}  // namespace relsy::smt
