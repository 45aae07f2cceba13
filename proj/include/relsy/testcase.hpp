#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "relsy/ast.hpp"
#include "relsy/integer.hpp"

namespace relsy {

// One table's content: rows are attribute tuples in declaration order.
using TableRows = std::set<std::vector<Integer>>;
using DbTables = std::map<std::string, TableRows>;

// A concrete test for one path: input database + method arguments, the
// expected outputs, and the result-set row orders the model committed to.
struct TestCase {
    std::string pathLabel;

    DbTables inputTables;
    DbTables outputTables;
    // List parameters: nullopt means the Java null reference.
    std::map<std::string, std::optional<std::vector<Integer>>> inputLists;
    std::map<std::string, std::optional<std::vector<Integer>>> outputLists;
    std::vector<Integer> scanner;

    bool hasReturn = false;
    bool returnIsList = false;
    std::optional<Integer> returnInt;                   // when !returnIsList
    std::optional<std::vector<Integer>> returnList;     // when returnIsList

    // SELECT row orders in path order: the k-th executed SELECT of a replay
    // materialises its rows in rows-order when the k-th entry is present.
    struct RsOrdering {
        std::string rs;     // result-set instance label, e.g. "shelves1"
        std::string table;
        std::vector<std::vector<Integer>> rows;
    };
    std::vector<RsOrdering> rsOrderings;
};

// Checks every schema integrity rule against explicit table contents;
// returns human-readable violations (empty = all constraints hold).
std::vector<std::string> validate_db(const Schema& schema, const DbTables& tables);

nlohmann::json testcase_to_json(const TestCase& tc);
TestCase testcase_from_json(const nlohmann::json& j);

}  // namespace relsy
