#include "relsy/smt/extract.hpp"

namespace relsy {

namespace {

using smt::IncompleteModel;
using smt::Model;
using smt::Value;

// Guard against a model assigning an absurd size to an otherwise
// unconstrained list or result set.
constexpr long long kMaxExtractedLength = 10000;

long long checked_length(const Integer& n, const std::string& what) {
    auto v = to_int64(n);
    if (!v || *v > kMaxExtractedLength)
        throw IncompleteModel("implausible " + what + " length " + to_string(n));
    return *v < 0 ? 0 : *v;
}

DbTables extract_tables(const Model& model,
                        const std::map<std::string, TableBinding>& bindings) {
    DbTables out;
    for (const auto& [table, tb] : bindings) {
        TableRows rows;
        // A sort the solver never needed gets no universe: the table can be
        // anything, and empty is the simplest witness.
        if (model.hasDef(tb.member)) {
            for (const auto& elem : model.universe(table)) {
                if (!model.apply(tb.member, {Value(elem)}).asBool()) continue;
                std::vector<Integer> row;
                row.reserve(tb.attrs.size());
                for (const auto& [attr, fn] : tb.attrs)
                    row.push_back(model.apply(fn, {Value(elem)}).asInt());
                rows.insert(std::move(row));
            }
        }
        out[table] = std::move(rows);
    }
    return out;
}

std::optional<std::vector<Integer>> extract_list(const Model& model,
                                                 const std::string& sym) {
    // A list symbol the solver omitted was unconstrained; null is the
    // simplest value consistent with that.
    if (!model.hasDef(sym)) return std::nullopt;
    smt::ListVal lv = model.evalConst(sym).asList();
    if (lv.isNull) return std::nullopt;
    long long n = checked_length(lv.size, "list");
    std::vector<Integer> vals;
    vals.reserve((size_t)n);
    for (long long k = 0; k < n; ++k)
        vals.push_back(model.select(lv.elements, Integer(k)));
    return vals;
}

}  // namespace

TestCase extract_testcase(const Model& model, const Bindings& bindings,
                          const std::string& pathLabel) {
    TestCase tc;
    tc.pathLabel = pathLabel;
    tc.inputTables = extract_tables(model, bindings.inputTables);
    tc.outputTables = extract_tables(model, bindings.outputTables);
    for (const auto& [param, sym] : bindings.inputLists)
        tc.inputLists[param] = extract_list(model, sym);
    for (const auto& [param, sym] : bindings.outputLists)
        tc.outputLists[param] = extract_list(model, sym);
    for (const auto& sym : bindings.scanner)
        tc.scanner.push_back(model.hasDef(sym) ? model.evalConst(sym).asInt()
                                               : Integer(0));

    if (bindings.returnSym) {
        tc.hasReturn = true;
        tc.returnIsList = bindings.returnIsList;
        if (bindings.returnIsList)
            tc.returnList = extract_list(model, *bindings.returnSym);
        else
            tc.returnInt = model.hasDef(*bindings.returnSym)
                               ? model.evalConst(*bindings.returnSym).asInt()
                               : Integer(0);
    }

    for (const auto& rsb : bindings.resultSets) {
        TestCase::RsOrdering ord;
        ord.rs = rsb.stem;
        ord.table = rsb.table;
        if (!model.hasDef(rsb.sizeSym)) continue;  // replay falls back to pk order
        long long n = checked_length(model.evalConst(rsb.sizeSym).asInt(), "result set");
        for (long long k = 0; k < n; ++k) {
            Value row = model.apply(rsb.listSym, {Value(Integer(k))});
            std::vector<Integer> tuple;
            tuple.reserve(rsb.attrs.size());
            for (const auto& [attr, fn] : rsb.attrs)
                tuple.push_back(model.apply(fn, {row}).asInt());
            ord.rows.push_back(std::move(tuple));
        }
        tc.rsOrderings.push_back(std::move(ord));
    }
    return tc;
}

}  // namespace relsy
