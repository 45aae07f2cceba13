#pragma once

#include <string>
#include <variant>
#include <vector>

#include "relsy/smt/term.hpp"

namespace relsy::smt {

struct SortDecl {
  std::string name;
};
struct ConstDecl {
  std::string name;
  Sort sort;
};
struct FunDecl {
  std::string name;
  std::vector<Sort> params;
  Sort result;
};
// The one algebraic datatype the engine ever declares:
// (declare-datatypes () ((BoundedList (mk-bounded-list
//   (isNull Bool) (size Int) (elements (Array Int Int))))))
struct BoundedListDecl {};
struct Assertion {
  TermPtr term;
};
struct Comment {
  std::string text;  // without the leading "; "
};

using Item = std::variant<SortDecl, ConstDecl, FunDecl, BoundedListDecl, Assertion, Comment>;

// Ordered list of declarations and assertions; symbols are declared before
// their first use in an assertion.
struct ConstraintSystem {
  std::vector<Item> items;

  void declareSort(std::string name) { items.push_back(SortDecl{std::move(name)}); }
  void declareConst(std::string name, Sort sort) {
    items.push_back(ConstDecl{std::move(name), std::move(sort)});
  }
  void declareFun(std::string name, std::vector<Sort> params, Sort result) {
    items.push_back(FunDecl{std::move(name), std::move(params), std::move(result)});
  }
  void declareBoundedList() { items.push_back(BoundedListDecl{}); }
  void assertTerm(TermPtr t) { items.push_back(Assertion{std::move(t)}); }
  void comment(std::string text) { items.push_back(Comment{std::move(text)}); }

  int assertionCount() const {
    int n = 0;
    for (const auto& it : items)
      if (std::holds_alternative<Assertion>(it)) ++n;
    return n;
  }
  std::vector<TermPtr> assertions() const {
    std::vector<TermPtr> out;
    for (const auto& it : items)
      if (const auto* a = std::get_if<Assertion>(&it)) out.push_back(a->term);
    return out;
  }
};

}  // namespace relsy::smt
