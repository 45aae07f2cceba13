#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "relsy/integer.hpp"
#include "relsy/smt/sexp.hpp"
#include "relsy/smt/term.hpp"

namespace relsy::smt {

// Raised when a model lacks something needed to evaluate a binding (missing
// function, unknown symbol, non-finite quantifier domain, malformed text).
struct IncompleteModel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An SMT array value: a chain of stores over either a constant default or a
// model-internal function graph ((_ as-array f)).
struct ArrayVal {
    std::map<Integer, Integer> overrides;
    std::optional<Integer> def;
    std::string viaFun;  // non-empty when the base is (_ as-array viaFun)
    Integer select(const Integer& idx) const;  // viaFun handled by Model::select
};

struct ListVal {
    bool isNull = false;
    Integer size = 0;
    ArrayVal elements;
};

// A first-order value: integer, boolean, universe element (by its printed
// name), array, or bounded list.
struct Value {
    std::variant<Integer, bool, std::string, ArrayVal, ListVal> v;

    Value() : v(Integer(0)) {}
    Value(Integer i) : v(std::move(i)) {}
    Value(bool b) : v(b) {}
    Value(std::string elem) : v(std::move(elem)) {}
    Value(ArrayVal a) : v(std::move(a)) {}
    Value(ListVal l) : v(std::move(l)) {}

    bool isInt() const { return std::holds_alternative<Integer>(v); }
    bool isBool() const { return std::holds_alternative<bool>(v); }
    bool isElem() const { return std::holds_alternative<std::string>(v); }
    bool isArray() const { return std::holds_alternative<ArrayVal>(v); }
    bool isList() const { return std::holds_alternative<ListVal>(v); }
    const Integer& asInt() const;
    bool asBool() const;
    const std::string& asElem() const;
    const ArrayVal& asArray() const;
    const ListVal& asList() const;

    bool operator==(const Value& o) const;
};

// A satisfying assignment: per-sort universes plus interpretations for the
// declared constants and functions.  Instances come either from parsing the
// solver's printed model or from programmatic construction (tests, finite
// model checks).
class Model {
public:
    // Parses the text the solver prints after `sat` (the parenthesised list
    // of declare-fun / define-fun items, with or without a leading `model`
    // keyword).
    static Model parse(const std::string& modelText);

    // Programmatic construction.
    void addUniverse(const std::string& sort, std::vector<std::string> elems);
    void defineConst(const std::string& name, Value val);
    void defineFun(const std::string& name,
                   std::function<Value(const std::vector<Value>&)> fn);

    // Universe of an uninterpreted sort; empty when the model never mentions
    // the sort (the caller decides whether to synthesise a default element).
    const std::vector<std::string>& universe(const std::string& sort) const;

    bool hasDef(const std::string& name) const;
    Value evalConst(const std::string& name) const;
    Value apply(const std::string& name, const std::vector<Value>& args) const;

    // Array select that can follow (_ as-array f) references back into the
    // model.
    Integer select(const ArrayVal& arr, const Integer& idx) const;

    // Evaluates a constraint term under this model, with `bound` giving
    // values for free variables (e.g. quantifier binders during testing).
    // Quantifiers range over the (finite) universe of their binder's sort;
    // Int-sorted binders cannot be enumerated and raise IncompleteModel.
    Value eval_term(const TermPtr& t,
                    const std::map<std::string, Value>& bound = {}) const;

private:
    struct ParsedDef {
        std::vector<std::string> params;
        Sexp body;
    };
    std::map<std::string, std::vector<std::string>> universes_;
    std::map<std::string, ParsedDef> parsed_;
    std::map<std::string, std::function<Value(const std::vector<Value>&)>> native_;
    std::map<std::string, Value> consts_;

    friend struct ModelEval;
};

}  // namespace relsy::smt
