#pragma once

#include <map>
#include <vector>

#include "relsy/ast.hpp"

namespace relsy {

// Stable identifiers for decision sites (if / while / assert / write-with-
// handler), assigned in AST preorder.  The path enumerator and the concrete
// interpreter share this numbering.
std::map<const Stmt*, int> number_sites(const MethodAst& m);

struct CfgEdge {
  enum class Label { Next, Then, Else, Enter, Exit, Ok, Catch, Pass, Violated };
  Label label;
  int to;
};

struct CfgNode {
  enum class Kind {
    Entry,
    Stmt,       // non-branching statement
    IfSite,
    WhileSite,
    AssertSite,
    WriteSite,  // DbWrite; two out-edges when a handler is attached
    Return,     // terminal
    End,        // terminal: method body ran to completion
    AssertFail  // terminal: a violated assert
  };
  Kind kind;
  const Stmt* stmt = nullptr;
  int siteId = -1;  // decision sites only
  std::vector<CfgEdge> out;
};

struct Cfg {
  std::vector<CfgNode> nodes;  // nodes[entry] is the Entry node
  int entry = 0;
  int endNode = -1;
  int assertFailNode = -1;
  int siteCount = 0;

  const CfgNode& operator[](int i) const { return nodes[static_cast<size_t>(i)]; }
};

// Builds the statement-level control-flow graph.  Every statement node is
// reachable from entry; the shared End/AssertFail terminals may be orphaned
// (e.g. End when every path returns).  WriteSites carry an Ok edge, plus a
// Catch edge when the write has a handler.
Cfg build_cfg(const MethodAst& m);

}  // namespace relsy
