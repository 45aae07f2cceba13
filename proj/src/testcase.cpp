#include "relsy/testcase.hpp"

#include <sstream>

namespace relsy {

namespace {

using nlohmann::json;

json int_to_json(const Integer& v) {
    if (auto i = to_int64(v)) return json(*i);
    return json(to_string(v));  // beyond int64: keep exact as a decimal string
}

Integer int_from_json(const json& j) {
    if (j.is_string()) return Integer(j.get<std::string>());
    if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
    return Integer(j.get<std::int64_t>());
}

json row_to_json(const std::vector<Integer>& row) {
    json a = json::array();
    for (const auto& v : row) a.push_back(int_to_json(v));
    return a;
}

std::vector<Integer> row_from_json(const json& j) {
    std::vector<Integer> row;
    for (const auto& v : j) row.push_back(int_from_json(v));
    return row;
}

json tables_to_json(const DbTables& tables) {
    json o = json::object();
    for (const auto& [name, rows] : tables) {
        json a = json::array();
        for (const auto& r : rows) a.push_back(row_to_json(r));
        o[name] = std::move(a);
    }
    return o;
}

DbTables tables_from_json(const json& j) {
    DbTables tables;
    for (auto it = j.begin(); it != j.end(); ++it) {
        TableRows rows;
        for (const auto& r : it.value()) rows.insert(row_from_json(r));
        tables[it.key()] = std::move(rows);
    }
    return tables;
}

json lists_to_json(
    const std::map<std::string, std::optional<std::vector<Integer>>>& lists) {
    json o = json::object();
    for (const auto& [name, val] : lists) {
        if (!val) o[name] = nullptr;
        else o[name] = row_to_json(*val);
    }
    return o;
}

std::map<std::string, std::optional<std::vector<Integer>>> lists_from_json(
    const json& j) {
    std::map<std::string, std::optional<std::vector<Integer>>> lists;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_null()) lists[it.key()] = std::nullopt;
        else lists[it.key()] = row_from_json(it.value());
    }
    return lists;
}

std::string row_text(const std::vector<Integer>& row) {
    std::ostringstream out;
    out << "(";
    for (size_t i = 0; i < row.size(); ++i)
        out << (i ? ", " : "") << to_string(row[i]);
    out << ")";
    return out.str();
}

bool cmp_holds(const Integer& lhs, CmpOp op, const Integer& rhs) {
    switch (op) {
        case CmpOp::Lt: return lhs < rhs;
        case CmpOp::Eq: return lhs == rhs;
        case CmpOp::Gt: return lhs > rhs;
    }
    return false;
}

}  // namespace

std::vector<std::string> validate_db(const Schema& schema, const DbTables& tables) {
    std::vector<std::string> problems;
    for (const auto& t : schema.tables) {
        auto it = tables.find(t.name);
        static const TableRows none;
        const TableRows& rows = it == tables.end() ? none : it->second;
        int pkPos = t.pkPos();
        std::set<Integer> seenPks;
        for (const auto& row : rows) {
            if (row.size() != t.attrs.size()) {
                problems.push_back(t.name + ": row " + row_text(row) + " has " +
                                   std::to_string(row.size()) + " attributes, expected " +
                                   std::to_string(t.attrs.size()));
                continue;
            }
            const Integer& pk = row[pkPos - 1];
            if (!seenPks.insert(pk).second)
                problems.push_back(t.name + ": duplicate primary key " + to_string(pk));
            for (const auto& fk : t.fks) {
                const Integer& ref = row[t.attrPos(fk.attr) - 1];
                const TableDef* parent = schema.table(fk.refTable);
                bool found = false;
                auto pit = tables.find(fk.refTable);
                if (parent && pit != tables.end()) {
                    int refPos = parent->attrPos(fk.refAttr);
                    for (const auto& prow : pit->second)
                        if (prow[refPos - 1] == ref) { found = true; break; }
                }
                if (!found)
                    problems.push_back(t.name + ": row " + row_text(row) +
                                       " references missing " + fk.refTable + "." +
                                       fk.refAttr + " = " + to_string(ref));
            }
            for (const auto& chk : t.checks) {
                const Integer& v = row[t.attrPos(chk.attr) - 1];
                if (!cmp_holds(v, chk.op, Integer(chk.bound)))
                    problems.push_back(t.name + ": row " + row_text(row) +
                                       " violates check " + chk.attr + " " +
                                       cmp_spelling(chk.op) + " " + chk.bound);
            }
        }
    }
    return problems;
}

nlohmann::json testcase_to_json(const TestCase& tc) {
    json j;
    j["path"] = tc.pathLabel;
    j["inputs"] = {{"tables", tables_to_json(tc.inputTables)},
                   {"lists", lists_to_json(tc.inputLists)},
                   {"scanner", row_to_json(tc.scanner)}};
    j["outputs"] = {{"tables", tables_to_json(tc.outputTables)},
                    {"lists", lists_to_json(tc.outputLists)}};
    if (tc.hasReturn) {
        if (!tc.returnIsList)
            j["outputs"]["return"] = tc.returnInt ? int_to_json(*tc.returnInt) : json();
        else
            j["outputs"]["return"] = tc.returnList ? row_to_json(*tc.returnList) : json();
    }
    json ords = json::array();
    for (const auto& o : tc.rsOrderings) {
        json rows = json::array();
        for (const auto& r : o.rows) rows.push_back(row_to_json(r));
        ords.push_back({{"rs", o.rs}, {"table", o.table}, {"rows", std::move(rows)}});
    }
    j["rsOrderings"] = std::move(ords);
    return j;
}

TestCase testcase_from_json(const nlohmann::json& j) {
    TestCase tc;
    tc.pathLabel = j.at("path").get<std::string>();
    const json& in = j.at("inputs");
    tc.inputTables = tables_from_json(in.at("tables"));
    tc.inputLists = lists_from_json(in.at("lists"));
    for (const auto& v : in.at("scanner")) tc.scanner.push_back(int_from_json(v));
    const json& out = j.at("outputs");
    tc.outputTables = tables_from_json(out.at("tables"));
    tc.outputLists = lists_from_json(out.at("lists"));
    if (out.contains("return")) {
        tc.hasReturn = true;
        const json& r = out.at("return");
        if (r.is_array()) {
            tc.returnIsList = true;
            tc.returnList = row_from_json(r);
        } else if (r.is_null()) {
            tc.returnIsList = true;  // a null scalar cannot occur; null means list
            tc.returnList = std::nullopt;
        } else {
            tc.returnInt = int_from_json(r);
        }
    }
    if (j.contains("rsOrderings")) {
        for (const auto& o : j.at("rsOrderings")) {
            TestCase::RsOrdering ord;
            ord.rs = o.at("rs").get<std::string>();
            ord.table = o.at("table").get<std::string>();
            for (const auto& r : o.at("rows")) ord.rows.push_back(row_from_json(r));
            tc.rsOrderings.push_back(std::move(ord));
        }
    }
    return tc;
}

}  // namespace relsy
