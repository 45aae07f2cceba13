#include "relsy/smt/model.hpp"

#include <algorithm>
#include <cctype>

namespace relsy::smt {

namespace {

bool is_int_literal(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-') ? 1 : 0;
    if (i >= s.size()) return false;
    return std::all_of(s.begin() + (long)i, s.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

[[noreturn]] void fail(const std::string& what) { throw IncompleteModel(what); }

}  // namespace

const Integer& Value::asInt() const {
    if (auto* p = std::get_if<Integer>(&v)) return *p;
    fail("expected an integer value");
}
bool Value::asBool() const {
    if (auto* p = std::get_if<bool>(&v)) return *p;
    fail("expected a boolean value");
}
const std::string& Value::asElem() const {
    if (auto* p = std::get_if<std::string>(&v)) return *p;
    fail("expected a row value");
}
const ArrayVal& Value::asArray() const {
    if (auto* p = std::get_if<ArrayVal>(&v)) return *p;
    fail("expected an array value");
}
const ListVal& Value::asList() const {
    if (auto* p = std::get_if<ListVal>(&v)) return *p;
    fail("expected a list value");
}

Integer ArrayVal::select(const Integer& idx) const {
    auto it = overrides.find(idx);
    if (it != overrides.end()) return it->second;
    if (def) return *def;
    return 0;
}

bool Value::operator==(const Value& o) const {
    if (v.index() != o.v.index()) {
        // Integers and booleans never cross-compare equal to other kinds.
        return false;
    }
    if (auto* a = std::get_if<ArrayVal>(&v)) {
        const auto& b = std::get<ArrayVal>(o.v);
        return a->overrides == b.overrides && a->def == b.def && a->viaFun == b.viaFun;
    }
    if (auto* a = std::get_if<ListVal>(&v)) {
        const auto& b = std::get<ListVal>(o.v);
        return a->isNull == b.isNull && a->size == b.size &&
               Value(a->elements) == Value(b.elements);
    }
    if (auto* a = std::get_if<Integer>(&v)) return *a == std::get<Integer>(o.v);
    if (auto* a = std::get_if<bool>(&v)) return *a == std::get<bool>(o.v);
    return std::get<std::string>(v) == std::get<std::string>(o.v);
}

// Shared evaluation core over values; the two tree walkers (Sexp bodies from
// parsed models, Term assertions) both funnel applications through here.
struct ModelEval {
    const Model& m;

    std::optional<Value> builtin(const std::string& head,
                                 const std::vector<Value>& args) const {
        auto intsOnly = [&] {
            for (const auto& a : args)
                if (!a.isInt()) fail("arithmetic over non-integer operands");
        };
        if (head == "not") return Value(!args.at(0).asBool());
        if (head == "and") {
            for (const auto& a : args)
                if (!a.asBool()) return Value(false);
            return Value(true);
        }
        if (head == "or") {
            for (const auto& a : args)
                if (a.asBool()) return Value(true);
            return Value(false);
        }
        if (head == "=>") {
            // Right-associated n-ary implication.
            bool acc = args.back().asBool();
            for (size_t i = args.size() - 1; i-- > 0;)
                acc = !args[i].asBool() || acc;
            return Value(acc);
        }
        if (head == "=") {
            for (size_t i = 1; i < args.size(); ++i)
                if (!(args[0] == args[i])) return Value(false);
            return Value(true);
        }
        if (head == "distinct") {
            for (size_t i = 0; i < args.size(); ++i)
                for (size_t j = i + 1; j < args.size(); ++j)
                    if (args[i] == args[j]) return Value(false);
            return Value(true);
        }
        if (head == "ite") return args.at(0).asBool() ? args.at(1) : args.at(2);
        if (head == "+") {
            intsOnly();
            Integer acc = 0;
            for (const auto& a : args) acc += a.asInt();
            return Value(acc);
        }
        if (head == "-") {
            intsOnly();
            if (args.size() == 1) return Value(Integer(-args[0].asInt()));
            Integer acc = args.at(0).asInt();
            for (size_t i = 1; i < args.size(); ++i) acc -= args[i].asInt();
            return Value(acc);
        }
        if (head == "*") {
            intsOnly();
            Integer acc = 1;
            for (const auto& a : args) acc *= a.asInt();
            return Value(acc);
        }
        if (head == "<") return Value(args.at(0).asInt() < args.at(1).asInt());
        if (head == "<=") return Value(args.at(0).asInt() <= args.at(1).asInt());
        if (head == ">") return Value(args.at(0).asInt() > args.at(1).asInt());
        if (head == ">=") return Value(args.at(0).asInt() >= args.at(1).asInt());
        if (head == "select")
            return Value(m.select(args.at(0).asArray(), args.at(1).asInt()));
        if (head == "store") {
            ArrayVal arr = args.at(0).asArray();
            arr.overrides[args.at(1).asInt()] = args.at(2).asInt();
            return Value(arr);
        }
        if (head == "mk-bounded-list") {
            ListVal l;
            l.isNull = args.at(0).asBool();
            l.size = args.at(1).asInt();
            l.elements = args.at(2).asArray();
            return Value(l);
        }
        if (head == "isNull") return Value(args.at(0).asList().isNull);
        if (head == "size") return Value(args.at(0).asList().size);
        if (head == "elements") return Value(args.at(0).asList().elements);
        return std::nullopt;
    }

    // ---- parsed s-expression bodies -------------------------------------
    Value eval(const Sexp& s, const std::map<std::string, Value>& env) const {
        if (s.atom) {
            auto it = env.find(s.text);
            if (it != env.end()) return it->second;
            if (s.text == "true") return Value(true);
            if (s.text == "false") return Value(false);
            if (is_int_literal(s.text)) return Value(Integer(s.text));
            return m.evalConst(s.text);
        }
        if (s.kids.empty()) fail("empty s-expression in model");
        const Sexp& head = s.kids[0];
        if (!head.atom) {
            // ((as const (Array Int Int)) v)
            if (head.kids.size() >= 2 && head.kids[0].atom &&
                head.kids[0].text == "as" && head.kids[1].atom &&
                head.kids[1].text == "const") {
                ArrayVal arr;
                arr.def = eval(s.kids.at(1), env).asInt();
                return Value(arr);
            }
            fail("unsupported compound head: " + sexp_to_string(head));
        }
        const std::string& h = head.text;
        if (h == "_") {
            // (_ as-array f)
            if (s.kids.size() == 3 && s.kids[1].atom && s.kids[1].text == "as-array") {
                ArrayVal arr;
                arr.viaFun = s.kids[2].text;
                return Value(arr);
            }
            fail("unsupported indexed identifier: " + sexp_to_string(s));
        }
        if (h == "as") return eval(s.kids.at(1), env);  // (as expr sort)
        if (h == "let") {
            std::map<std::string, Value> inner = env;
            for (const Sexp& bind : s.kids.at(1).kids)
                inner[bind.kids.at(0).text] = eval(bind.kids.at(1), env);
            return eval(s.kids.at(2), inner);
        }
        if (h == "ite")
            return eval(s.kids.at(1), env).asBool() ? eval(s.kids.at(2), env)
                                                    : eval(s.kids.at(3), env);
        if (h == "and") {
            for (size_t i = 1; i < s.kids.size(); ++i)
                if (!eval(s.kids[i], env).asBool()) return Value(false);
            return Value(true);
        }
        if (h == "or") {
            for (size_t i = 1; i < s.kids.size(); ++i)
                if (eval(s.kids[i], env).asBool()) return Value(true);
            return Value(false);
        }
        std::vector<Value> args;
        args.reserve(s.kids.size() - 1);
        for (size_t i = 1; i < s.kids.size(); ++i) args.push_back(eval(s.kids[i], env));
        if (auto v = builtin(h, args)) return *v;
        return m.apply(h, args);
    }

    // ---- constraint terms ------------------------------------------------
    Value eval(const TermPtr& t, const std::map<std::string, Value>& env) const {
        switch (t->kind) {
            case Term::Kind::IntLit: return Value(t->num);
            case Term::Kind::BoolLit: return Value(t->b);
            case Term::Kind::Sym: {
                auto it = env.find(t->head);
                if (it != env.end()) return it->second;
                return m.evalConst(t->head);
            }
            case Term::Kind::App: {
                const std::string& h = t->head;
                if (h == "ite")
                    return eval(t->args.at(0), env).asBool()
                               ? eval(t->args.at(1), env)
                               : eval(t->args.at(2), env);
                if (h == "and") {
                    for (const auto& a : t->args)
                        if (!eval(a, env).asBool()) return Value(false);
                    return Value(true);
                }
                if (h == "or") {
                    for (const auto& a : t->args)
                        if (eval(a, env).asBool()) return Value(true);
                    return Value(false);
                }
                if (h == "=>") {
                    for (size_t i = 0; i + 1 < t->args.size(); ++i)
                        if (!eval(t->args[i], env).asBool()) return Value(true);
                    return eval(t->args.back(), env);
                }
                std::vector<Value> args;
                args.reserve(t->args.size());
                for (const auto& a : t->args) args.push_back(eval(a, env));
                if (auto v = builtin(h, args)) return *v;
                return m.apply(h, args);
            }
            case Term::Kind::Forall:
            case Term::Kind::Exists: {
                bool isForall = t->kind == Term::Kind::Forall;
                return quantify(t, env, 0, isForall);
            }
        }
        fail("unreachable term kind");
    }

    Value quantify(const TermPtr& t, std::map<std::string, Value> env, size_t i,
                   bool isForall) const {
        if (i == t->binders.size()) return eval(t->body, env);
        const auto& [name, sort] = t->binders[i];
        if (sort.kind != Sort::Kind::Row)
            fail("cannot enumerate quantifier over sort " + sort.name());
        const auto& univ = m.universe(sort.row);
        if (univ.empty())
            // An empty universe means the sort is unconstrained; a single
            // anonymous element represents it.
            return quantifyOver(t, env, i, isForall, {sort.row + "!default!0"});
        return quantifyOver(t, env, i, isForall, univ);
    }

    Value quantifyOver(const TermPtr& t, std::map<std::string, Value>& env,
                       size_t i, bool isForall,
                       const std::vector<std::string>& univ) const {
        const std::string& name = t->binders[i].first;
        for (const auto& elem : univ) {
            env[name] = Value(elem);
            bool v = quantify(t, env, i + 1, isForall).asBool();
            if (isForall && !v) return Value(false);
            if (!isForall && v) return Value(true);
        }
        env.erase(name);
        return Value(isForall);
    }
};

Model Model::parse(const std::string& modelText) {
    auto parsed = parse_sexps(modelText);
    if (!parsed) fail("unparseable model text");
    std::vector<Sexp> items;
    if (parsed->size() == 1 && !(*parsed)[0].atom) {
        items = (*parsed)[0].kids;
        if (!items.empty() && items[0].atom && items[0].text == "model")
            items.erase(items.begin());
    } else {
        items = std::move(*parsed);
    }

    Model m;
    for (const Sexp& it : items) {
        if (it.atom || it.kids.empty() || !it.kids[0].atom) continue;
        const std::string& h = it.kids[0].text;
        if (h == "declare-fun" && it.kids.size() == 4 && it.kids[1].atom &&
            !it.kids[2].atom && it.kids[2].kids.empty() && it.kids[3].atom) {
            const std::string& sort = it.kids[3].text;
            if (sort != "Int" && sort != "Bool" && sort != "BoundedList") {
                m.universes_[sort].push_back(it.kids[1].text);
                m.consts_.emplace(it.kids[1].text, Value(it.kids[1].text));
            }
            continue;
        }
        if (h == "define-fun" && it.kids.size() >= 5 && it.kids[1].atom) {
            ParsedDef def;
            for (const Sexp& p : it.kids[2].kids) def.params.push_back(p.kids.at(0).text);
            def.body = it.kids[4];
            m.parsed_[it.kids[1].text] = std::move(def);
            continue;
        }
        // `forall` cardinality notes and anything else are not needed.
    }
    return m;
}

void Model::addUniverse(const std::string& sort, std::vector<std::string> elems) {
    auto& u = universes_[sort];
    for (auto& e : elems) {
        consts_.emplace(e, Value(e));
        u.push_back(std::move(e));
    }
}

void Model::defineConst(const std::string& name, Value val) {
    consts_[name] = std::move(val);
}

void Model::defineFun(const std::string& name,
                      std::function<Value(const std::vector<Value>&)> fn) {
    native_[name] = std::move(fn);
}

const std::vector<std::string>& Model::universe(const std::string& sort) const {
    static const std::vector<std::string> empty;
    auto it = universes_.find(sort);
    return it == universes_.end() ? empty : it->second;
}

bool Model::hasDef(const std::string& name) const {
    return consts_.count(name) || parsed_.count(name) || native_.count(name);
}

Value Model::evalConst(const std::string& name) const {
    auto it = consts_.find(name);
    if (it != consts_.end()) return it->second;
    return apply(name, {});
}

Value Model::apply(const std::string& name, const std::vector<Value>& args) const {
    auto nit = native_.find(name);
    if (nit != native_.end()) return nit->second(args);
    auto pit = parsed_.find(name);
    if (pit == parsed_.end()) {
        if (args.empty()) {
            auto cit = consts_.find(name);
            if (cit != consts_.end()) return cit->second;
        }
        fail("model has no interpretation for " + name);
    }
    const ParsedDef& def = pit->second;
    if (def.params.size() != args.size())
        fail("arity mismatch applying " + name);
    std::map<std::string, Value> env;
    for (size_t i = 0; i < args.size(); ++i) env[def.params[i]] = args[i];
    return ModelEval{*this}.eval(def.body, env);
}

Integer Model::select(const ArrayVal& arr, const Integer& idx) const {
    auto it = arr.overrides.find(idx);
    if (it != arr.overrides.end()) return it->second;
    if (arr.def) return *arr.def;
    if (!arr.viaFun.empty()) return apply(arr.viaFun, {Value(idx)}).asInt();
    return 0;
}

Value Model::eval_term(const TermPtr& t,
                       const std::map<std::string, Value>& bound) const {
    return ModelEval{*this}.eval(t, bound);
}

}  // namespace relsy::smt
