#include "relsy/cfg.hpp"

namespace relsy {

namespace {

void numberBlock(const Block& b, int& next, std::map<const Stmt*, int>& out) {
  for (const auto& sp : b) {
    const Stmt& s = *sp;
    switch (s.kind) {
      case Stmt::Kind::If:
        out[&s] = next++;
        numberBlock(s.thenBody, next, out);
        numberBlock(s.elseBody, next, out);
        break;
      case Stmt::Kind::While:
        out[&s] = next++;
        numberBlock(s.thenBody, next, out);
        break;
      case Stmt::Kind::Assert:
        out[&s] = next++;
        break;
      case Stmt::Kind::TryWrite:
        out[&s] = next++;
        numberBlock(s.handler, next, out);
        break;
      default:
        break;
    }
  }
}

class Builder {
 public:
  explicit Builder(const MethodAst& m) : sites_(number_sites(m)) {
    cfg_.nodes.push_back({CfgNode::Kind::Entry});
    cfg_.endNode = addNode(CfgNode::Kind::End, nullptr);
    cfg_.assertFailNode = addNode(CfgNode::Kind::AssertFail, nullptr);
    int first = buildBlock(m.body, cfg_.endNode);
    cfg_.nodes[0].out.push_back({CfgEdge::Label::Next, first});
    cfg_.siteCount = static_cast<int>(sites_.size());
  }

  Cfg take() { return std::move(cfg_); }

 private:
  Cfg cfg_;
  std::map<const Stmt*, int> sites_;

  int addNode(CfgNode::Kind k, const Stmt* s, int siteId = -1) {
    cfg_.nodes.push_back({k, s, siteId, {}});
    return static_cast<int>(cfg_.nodes.size()) - 1;
  }
  void edge(int from, CfgEdge::Label l, int to) {
    cfg_.nodes[static_cast<size_t>(from)].out.push_back({l, to});
  }

  // Builds `b`, falling through to `cont`; returns the block's first node.
  int buildBlock(const Block& b, int cont) {
    int next = cont;
    for (auto it = b.rbegin(); it != b.rend(); ++it) next = buildStmt(**it, next);
    return next;
  }

  int buildStmt(const Stmt& s, int cont) {
    switch (s.kind) {
      case Stmt::Kind::If: {
        int n = addNode(CfgNode::Kind::IfSite, &s, sites_.at(&s));
        edge(n, CfgEdge::Label::Then, buildBlock(s.thenBody, cont));
        edge(n, CfgEdge::Label::Else, buildBlock(s.elseBody, cont));
        return n;
      }
      case Stmt::Kind::While: {
        int n = addNode(CfgNode::Kind::WhileSite, &s, sites_.at(&s));
        edge(n, CfgEdge::Label::Enter, buildBlock(s.thenBody, n));
        edge(n, CfgEdge::Label::Exit, cont);
        return n;
      }
      case Stmt::Kind::Assert: {
        int n = addNode(CfgNode::Kind::AssertSite, &s, sites_.at(&s));
        edge(n, CfgEdge::Label::Pass, cont);
        edge(n, CfgEdge::Label::Violated, cfg_.assertFailNode);
        return n;
      }
      case Stmt::Kind::TryWrite: {
        int n = addNode(CfgNode::Kind::WriteSite, &s, sites_.at(&s));
        edge(n, CfgEdge::Label::Ok, cont);
        edge(n, CfgEdge::Label::Catch, buildBlock(s.handler, cont));
        return n;
      }
      case Stmt::Kind::Write: {
        int n = addNode(CfgNode::Kind::WriteSite, &s);
        edge(n, CfgEdge::Label::Ok, cont);
        return n;
      }
      case Stmt::Kind::Return: {
        int n = addNode(CfgNode::Kind::Return, &s);
        return n;
      }
      default: {
        int n = addNode(CfgNode::Kind::Stmt, &s);
        edge(n, CfgEdge::Label::Next, cont);
        return n;
      }
    }
  }
};

}  // namespace

std::map<const Stmt*, int> number_sites(const MethodAst& m) {
  std::map<const Stmt*, int> out;
  int next = 0;
  numberBlock(m.body, next, out);
  return out;
}

Cfg build_cfg(const MethodAst& m) { return Builder(m).take(); }

}  // namespace relsy
