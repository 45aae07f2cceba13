#pragma once

#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relsy/ast.hpp"

namespace relsy {

// Versioned symbol environment of one symbolic execution.  Every emitted
// symbol is <base><version>; bases are lowercased Java variable names or
// verbatim SQL table/attribute names.  A single global counter per base plus
// a used-name set guarantees collision-free fresh generation, including
// across rollbacks (rewinding current versions never rewinds counters).
class SymbolEnv {
 public:
  explicit SymbolEnv(const Schema& schema) : schema_(&schema) {}

  static std::string lowerBase(const std::string& javaVar) {
    std::string out = javaVar;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  }

  // Next unused <base><n>.  Names produced by other bases are skipped, so
  // e.g. a variable "input1" never collides with version 11 of "input".
  std::string fresh(const std::string& base) {
    int& n = counter_[base];
    std::string name;
    do {
      ++n;
      name = base + std::to_string(n);
    } while (used_.count(name));
    used_.insert(name);
    return name;
  }
  // Registers an auxiliary name derived from a fresh stem (rs helpers).
  void reserve(const std::string& name) { used_.insert(name); }

  // --- integer variables -------------------------------------------------
  void bindInt(const std::string& var, std::string sym) { intVar_[var] = std::move(sym); }
  const std::string& intSym(const std::string& var) const { return intVar_.at(var); }

  // --- list variables: object identity behind the variable ----------------
  // x = y aliases the object; add/remove bump the object's symbol so every
  // alias observes the mutation, matching Java reference semantics.
  int newListObject(std::string sym) {
    objectSym_.push_back(std::move(sym));
    return static_cast<int>(objectSym_.size()) - 1;
  }
  void bindListVar(const std::string& var, int obj) { listVar_[var] = obj; }
  int listObject(const std::string& var) const { return listVar_.at(var); }
  const std::string& objectSym(int obj) const { return objectSym_.at(static_cast<size_t>(obj)); }
  void setObjectSym(int obj, std::string sym) {
    objectSym_.at(static_cast<size_t>(obj)) = std::move(sym);
  }
  const std::string& listSym(const std::string& var) const { return objectSym(listObject(var)); }

  // --- result sets ---------------------------------------------------------
  struct RsInfo {
    std::string stem;  // e.g. "shelves1"; helper symbols append Size/List/...
    std::string table;
    std::string sizeSym, listSym, invSym, trigSym;
    int nextCount = 0;  // number of next() calls evaluated so far
    std::vector<std::string> projection;
    // All table attributes with their symbol versions at query time
    // (materialized-row reads: later writes do not change fetched values).
    std::vector<std::pair<std::string, std::string>> attrSnap;
  };
  void bindRs(const std::string& var, RsInfo info) {
    rsVar_[var] = rsInstances_.size();
    rsInstances_.push_back(std::move(info));
  }
  RsInfo& rs(const std::string& var) { return rsInstances_.at(rsVar_.at(var)); }
  const RsInfo& rs(const std::string& var) const { return rsInstances_.at(rsVar_.at(var)); }
  const std::vector<RsInfo>& resultSets() const { return rsInstances_; }

  // --- table content and attribute versions -------------------------------
  const std::string& memberSym(const std::string& table) const { return member_.at(table); }
  const std::string& attrSym(const std::string& table, const std::string& attr) const {
    return attr_.at({table, attr});
  }
  void setMemberSym(const std::string& table, std::string sym) { member_[table] = std::move(sym); }
  void setAttrSym(const std::string& table, const std::string& attr, std::string sym) {
    attr_[{table, attr}] = std::move(sym);
  }

  // --- transactions --------------------------------------------------------
  // A transaction is open from method start; commit/rollback end it and
  // start the next one.
  void beginTx() {
    txMember_ = member_;
    txAttr_ = attr_;
  }
  void rollbackTx() {
    member_ = txMember_;
    attr_ = txAttr_;
    beginTx();
  }
  const std::map<std::string, std::string>& txMembers() const { return txMember_; }
  const std::map<std::pair<std::string, std::string>, std::string>& txAttrs() const {
    return txAttr_;
  }

  // --- scanner ---------------------------------------------------------------
  void pushScanner(const std::string& sym) { scanner_.push_back(sym); }
  const std::vector<std::string>& scannerLog() const { return scanner_; }

  const Schema& schema() const { return *schema_; }

 private:
  const Schema* schema_;
  std::map<std::string, int> counter_;
  std::set<std::string> used_;
  std::map<std::string, std::string> intVar_;
  std::map<std::string, int> listVar_;
  std::vector<std::string> objectSym_;
  std::map<std::string, size_t> rsVar_;
  std::vector<RsInfo> rsInstances_;
  std::map<std::string, std::string> member_;
  std::map<std::pair<std::string, std::string>, std::string> attr_;
  std::map<std::string, std::string> txMember_;
  std::map<std::pair<std::string, std::string>, std::string> txAttr_;
  std::vector<std::string> scanner_;
};

}  // namespace relsy
