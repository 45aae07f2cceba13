#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relsy/cfg.hpp"

namespace relsy {

struct Decision {
  enum class Kind { IfBranch, LoopEnter, LoopExit, AssertOutcome, CatchTaken };
  Kind kind;
  int siteId;
  // IfBranch: then-branch taken; AssertOutcome: assertion violated;
  // CatchTaken: the write failed and the handler runs.  Always true for
  // LoopEnter, false for LoopExit.
  bool flag;

  bool operator==(const Decision&) const = default;
};

enum class TerminalKind { Return, EndOfBody, AssertViolation };

struct Path {
  std::vector<Decision> decisions;
  TerminalKind terminal = TerminalKind::EndOfBody;
  const Stmt* returnStmt = nullptr;  // set when terminal == Return
};

// Human-readable, filename-safe, injective encoding of the decision list:
// tokens like i3t/i3f (if), w0e/w0x (loop), a2v/a2p (assert), c5y/c5n
// (handler) joined by '.'; the empty list prints as "straight".
std::string path_label(const Path& p);

// Inverse of path_label (decisions only; terminal comes from the walk).
std::optional<std::vector<Decision>> parse_path_label(const std::string& label);

// Follows a decision list through the graph.  Returns the completed Path, or
// nullopt when the decisions do not fit (wrong site, leftover, early end).
std::optional<Path> walk_decisions(const Cfg& cfg, const std::vector<Decision>& ds);

// Depth-first enumeration of all finite paths with at most k consecutive
// iterations per loop site (the count resets when the loop is re-entered
// after an exit).  The taken/enter branch is explored before its complement,
// and for writes the success continuation before the handler.
void enumerate_paths(const Cfg& cfg, int k, const std::function<void(const Path&)>& fn);
std::vector<Path> enumerate_paths_vec(const Cfg& cfg, int k);

}  // namespace relsy
