#include "relsy/smt/render.hpp"

#include <sstream>

namespace relsy::smt {
namespace {

void renderInto(const Term& t, std::string& out) {
  switch (t.kind) {
    case Term::Kind::IntLit:
      if (t.num < 0) {
        out += "(- ";
        out += relsy::to_string(-t.num);
        out += ')';
      } else {
        out += relsy::to_string(t.num);
      }
      return;
    case Term::Kind::BoolLit:
      out += t.b ? "true" : "false";
      return;
    case Term::Kind::Sym:
      out += t.head;
      return;
    case Term::Kind::App:
      out += '(';
      out += t.head;
      for (const auto& a : t.args) {
        out += ' ';
        renderInto(*a, out);
      }
      out += ')';
      return;
    case Term::Kind::Forall:
    case Term::Kind::Exists: {
      out += t.kind == Term::Kind::Forall ? "(forall (" : "(exists (";
      for (size_t i = 0; i < t.binders.size(); ++i) {
        if (i) out += ' ';
        out += '(';
        out += t.binders[i].first;
        out += ' ';
        out += t.binders[i].second.name();
        out += ')';
      }
      out += ") ";
      if (t.pattern) {
        out += "(! ";
        renderInto(*t.body, out);
        out += " :pattern ";
        renderInto(*t.pattern, out);
        out += ')';
      } else {
        renderInto(*t.body, out);
      }
      out += ')';
      return;
    }
  }
}

struct ItemRenderer {
  std::ostream& out;

  void operator()(const SortDecl& d) const { out << "(declare-sort " << d.name << ")\n"; }
  void operator()(const ConstDecl& d) const {
    out << "(declare-const " << d.name << " " << d.sort.name() << ")\n";
  }
  void operator()(const FunDecl& d) const {
    out << "(declare-fun " << d.name << " (";
    for (size_t i = 0; i < d.params.size(); ++i) {
      if (i) out << ' ';
      out << d.params[i].name();
    }
    out << ") " << d.result.name() << ")\n";
  }
  void operator()(const BoundedListDecl&) const {
    out << "(declare-datatypes () ((BoundedList (mk-bounded-list (isNull Bool) (size Int) "
           "(elements (Array Int Int))))))\n";
  }
  void operator()(const Assertion& a) const { out << "(assert " << render_term(a.term) << ")\n"; }
  void operator()(const Comment& c) const { out << "; " << c.text << "\n"; }
};

}  // namespace

std::string render_term(const Term& t) {
  std::string out;
  renderInto(t, out);
  return out;
}
std::string render_term(const TermPtr& t) { return render_term(*t); }

std::string render_script(const ConstraintSystem& sys, bool checkSat) {
  std::ostringstream out;
  for (const auto& item : sys.items) std::visit(ItemRenderer{out}, item);
  if (checkSat) out << "(check-sat)\n(get-model)\n";
  return out.str();
}

}  // namespace relsy::smt
