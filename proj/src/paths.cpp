#include "relsy/paths.hpp"

#include <cctype>
#include <map>

namespace relsy {

namespace {

char decisionLetter(const Decision& d) {
  switch (d.kind) {
    case Decision::Kind::IfBranch: return d.flag ? 't' : 'f';
    case Decision::Kind::LoopEnter: return 'e';
    case Decision::Kind::LoopExit: return 'x';
    case Decision::Kind::AssertOutcome: return d.flag ? 'v' : 'p';
    case Decision::Kind::CatchTaken: return d.flag ? 'y' : 'n';
  }
  return '?';
}

char siteLetter(const Decision& d) {
  switch (d.kind) {
    case Decision::Kind::IfBranch: return 'i';
    case Decision::Kind::LoopEnter:
    case Decision::Kind::LoopExit: return 'w';
    case Decision::Kind::AssertOutcome: return 'a';
    case Decision::Kind::CatchTaken: return 'c';
  }
  return '?';
}

class Enumerator {
 public:
  Enumerator(const Cfg& cfg, int k, const std::function<void(const Path&)>& fn)
      : cfg_(cfg), k_(k), fn_(fn) {}

  void run() { visit(cfg_.entry); }

 private:
  const Cfg& cfg_;
  int k_;
  const std::function<void(const Path&)>& fn_;
  std::vector<Decision> ds_;
  std::map<int, int> loopCount_;

  int follow(int node, CfgEdge::Label l) const {
    for (const auto& e : cfg_[node].out)
      if (e.label == l) return e.to;
    return -1;
  }

  void emit(TerminalKind t, const Stmt* ret) {
    Path p;
    p.decisions = ds_;
    p.terminal = t;
    p.returnStmt = ret;
    fn_(p);
  }

  void branch(Decision d, int to) {
    ds_.push_back(d);
    visit(to);
    ds_.pop_back();
  }

  void visit(int n) {
    const CfgNode& node = cfg_[n];
    switch (node.kind) {
      case CfgNode::Kind::Entry:
      case CfgNode::Kind::Stmt:
        visit(follow(n, CfgEdge::Label::Next));
        break;
      case CfgNode::Kind::IfSite:
        branch({Decision::Kind::IfBranch, node.siteId, true},
               follow(n, CfgEdge::Label::Then));
        branch({Decision::Kind::IfBranch, node.siteId, false},
               follow(n, CfgEdge::Label::Else));
        break;
      case CfgNode::Kind::WhileSite: {
        int& count = loopCount_[node.siteId];
        if (count < k_) {
          ++count;
          branch({Decision::Kind::LoopEnter, node.siteId, true},
                 follow(n, CfgEdge::Label::Enter));
          --count;
        }
        int saved = count;
        count = 0;  // a later re-entry starts a fresh iteration budget
        branch({Decision::Kind::LoopExit, node.siteId, false},
               follow(n, CfgEdge::Label::Exit));
        count = saved;
        break;
      }
      case CfgNode::Kind::AssertSite:
        branch({Decision::Kind::AssertOutcome, node.siteId, false},
               follow(n, CfgEdge::Label::Pass));
        branch({Decision::Kind::AssertOutcome, node.siteId, true},
               follow(n, CfgEdge::Label::Violated));
        break;
      case CfgNode::Kind::WriteSite: {
        int catchTo = follow(n, CfgEdge::Label::Catch);
        if (catchTo < 0) {
          visit(follow(n, CfgEdge::Label::Ok));  // no handler: success only
        } else {
          branch({Decision::Kind::CatchTaken, node.siteId, false},
                 follow(n, CfgEdge::Label::Ok));
          branch({Decision::Kind::CatchTaken, node.siteId, true}, catchTo);
        }
        break;
      }
      case CfgNode::Kind::Return:
        emit(TerminalKind::Return, node.stmt);
        break;
      case CfgNode::Kind::End:
        emit(TerminalKind::EndOfBody, nullptr);
        break;
      case CfgNode::Kind::AssertFail:
        emit(TerminalKind::AssertViolation, nullptr);
        break;
    }
  }
};

}  // namespace

std::string path_label(const Path& p) {
  if (p.decisions.empty()) return "straight";
  std::string out;
  for (size_t i = 0; i < p.decisions.size(); ++i) {
    const Decision& d = p.decisions[i];
    if (i) out += '.';
    out += siteLetter(d);
    out += std::to_string(d.siteId);
    out += decisionLetter(d);
  }
  return out;
}

std::optional<std::vector<Decision>> parse_path_label(const std::string& label) {
  std::vector<Decision> ds;
  if (label == "straight") return ds;
  size_t i = 0;
  while (i < label.size()) {
    char site = label[i++];
    size_t start = i;
    while (i < label.size() && std::isdigit(static_cast<unsigned char>(label[i]))) ++i;
    if (start == i) return std::nullopt;
    int id = std::stoi(label.substr(start, i - start));
    if (i >= label.size()) return std::nullopt;
    char outcome = label[i++];
    Decision d{Decision::Kind::IfBranch, id, false};
    if (site == 'i' && (outcome == 't' || outcome == 'f'))
      d = {Decision::Kind::IfBranch, id, outcome == 't'};
    else if (site == 'w' && outcome == 'e')
      d = {Decision::Kind::LoopEnter, id, true};
    else if (site == 'w' && outcome == 'x')
      d = {Decision::Kind::LoopExit, id, false};
    else if (site == 'a' && (outcome == 'v' || outcome == 'p'))
      d = {Decision::Kind::AssertOutcome, id, outcome == 'v'};
    else if (site == 'c' && (outcome == 'y' || outcome == 'n'))
      d = {Decision::Kind::CatchTaken, id, outcome == 'y'};
    else
      return std::nullopt;
    ds.push_back(d);
    if (i < label.size()) {
      if (label[i] != '.') return std::nullopt;
      ++i;
    }
  }
  if (ds.empty()) return std::nullopt;
  return ds;
}

std::optional<Path> walk_decisions(const Cfg& cfg, const std::vector<Decision>& ds) {
  size_t next = 0;
  int n = cfg.entry;
  auto take = [&](Decision::Kind k, int site) -> std::optional<bool> {
    if (next >= ds.size()) return std::nullopt;
    const Decision& d = ds[next];
    bool kindOk = d.kind == k ||
                  (k == Decision::Kind::LoopEnter && d.kind == Decision::Kind::LoopExit);
    if (!kindOk || d.siteId != site) return std::nullopt;
    ++next;
    return d.flag || d.kind == Decision::Kind::LoopEnter;
  };
  auto follow = [&](CfgEdge::Label l) {
    for (const auto& e : cfg[n].out)
      if (e.label == l) return e.to;
    return -1;
  };
  while (true) {
    const CfgNode& node = cfg[n];
    switch (node.kind) {
      case CfgNode::Kind::Entry:
      case CfgNode::Kind::Stmt:
        n = follow(CfgEdge::Label::Next);
        break;
      case CfgNode::Kind::IfSite: {
        auto f = take(Decision::Kind::IfBranch, node.siteId);
        if (!f) return std::nullopt;
        n = follow(*f ? CfgEdge::Label::Then : CfgEdge::Label::Else);
        break;
      }
      case CfgNode::Kind::WhileSite: {
        auto f = take(Decision::Kind::LoopEnter, node.siteId);
        if (!f) return std::nullopt;
        n = follow(*f ? CfgEdge::Label::Enter : CfgEdge::Label::Exit);
        break;
      }
      case CfgNode::Kind::AssertSite: {
        auto f = take(Decision::Kind::AssertOutcome, node.siteId);
        if (!f) return std::nullopt;
        n = follow(*f ? CfgEdge::Label::Violated : CfgEdge::Label::Pass);
        break;
      }
      case CfgNode::Kind::WriteSite: {
        if (follow(CfgEdge::Label::Catch) < 0) {
          n = follow(CfgEdge::Label::Ok);
          break;
        }
        auto f = take(Decision::Kind::CatchTaken, node.siteId);
        if (!f) return std::nullopt;
        n = follow(*f ? CfgEdge::Label::Catch : CfgEdge::Label::Ok);
        break;
      }
      case CfgNode::Kind::Return:
      case CfgNode::Kind::End:
      case CfgNode::Kind::AssertFail: {
        if (next != ds.size()) return std::nullopt;  // leftover decisions
        Path p;
        p.decisions = ds;
        p.terminal = node.kind == CfgNode::Kind::Return ? TerminalKind::Return
                     : node.kind == CfgNode::Kind::End  ? TerminalKind::EndOfBody
                                                        : TerminalKind::AssertViolation;
        p.returnStmt = node.kind == CfgNode::Kind::Return ? node.stmt : nullptr;
        return p;
      }
    }
  }
}

void enumerate_paths(const Cfg& cfg, int k, const std::function<void(const Path&)>& fn) {
  Enumerator(cfg, k, fn).run();
}

std::vector<Path> enumerate_paths_vec(const Cfg& cfg, int k) {
  std::vector<Path> out;
  enumerate_paths(cfg, k, [&](const Path& p) { out.push_back(p); });
  return out;
}

}  // namespace relsy
