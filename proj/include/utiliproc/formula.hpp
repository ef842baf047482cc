#pragma once

#include <memory>
#include <string>
#include <vector>

#include "utiliproc/action.hpp"

namespace utiliproc {

enum class FormKind {
  Atom,
  Bottom,
  Top,
  Not,
  And,
  Or,
  Implies,
  Diamond,   // <a> phi
  Box,       // [a] phi
  MultUnit,  // emp
  Star,      // phi * psi
  Wand,      // phi -* psi
  PrefBox,   // [pref u] phi
  PrefDiamond
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
 public:
  static FormulaPtr atom(std::string name) { return make(FormKind::Atom, std::move(name)); }
  static FormulaPtr bottom() { return make(FormKind::Bottom); }
  static FormulaPtr top() { return make(FormKind::Top); }
  static FormulaPtr lnot(FormulaPtr p) { return make(FormKind::Not, "", {}, {std::move(p)}); }
  static FormulaPtr land(FormulaPtr p, FormulaPtr q) {
    return make(FormKind::And, "", {}, {std::move(p), std::move(q)});
  }
  static FormulaPtr lor(FormulaPtr p, FormulaPtr q) {
    return make(FormKind::Or, "", {}, {std::move(p), std::move(q)});
  }
  static FormulaPtr implies(FormulaPtr p, FormulaPtr q) {
    return make(FormKind::Implies, "", {}, {std::move(p), std::move(q)});
  }
  static FormulaPtr diamond(Action a, FormulaPtr p) {
    return make(FormKind::Diamond, "", std::move(a), {std::move(p)});
  }
  static FormulaPtr box(Action a, FormulaPtr p) {
    return make(FormKind::Box, "", std::move(a), {std::move(p)});
  }
  static FormulaPtr mult_unit() { return make(FormKind::MultUnit); }
  static FormulaPtr star(FormulaPtr p, FormulaPtr q) {
    return make(FormKind::Star, "", {}, {std::move(p), std::move(q)});
  }
  static FormulaPtr wand(FormulaPtr p, FormulaPtr q) {
    return make(FormKind::Wand, "", {}, {std::move(p), std::move(q)});
  }
  static FormulaPtr pref_box(std::string u, FormulaPtr p) {
    return make(FormKind::PrefBox, std::move(u), {}, {std::move(p)});
  }
  static FormulaPtr pref_diamond(std::string u, FormulaPtr p) {
    return make(FormKind::PrefDiamond, std::move(u), {}, {std::move(p)});
  }

  FormKind kind() const { return kind_; }
  const std::string& name() const { return name_; }  // Atom: proposition; Pref*: utility
  const Action& action() const { return action_; }
  const std::vector<FormulaPtr>& kids() const { return kids_; }

  Formula(FormKind k, std::string n, Action a, std::vector<FormulaPtr> kids)
      : kind_(k), name_(std::move(n)), action_(std::move(a)), kids_(std::move(kids)) {}

 private:
  static FormulaPtr make(FormKind k, std::string n = "", Action a = {},
                         std::vector<FormulaPtr> kids = {}) {
    return std::make_shared<Formula>(k, std::move(n), std::move(a), std::move(kids));
  }

  FormKind kind_;
  std::string name_;
  Action action_;
  std::vector<FormulaPtr> kids_;
};

// Concrete syntax, parseable by the model-file grammar. Precedence:
// unary > * > and > or > -> and -* (the last two right-associative).
inline std::string formula_str(const FormulaPtr& f, int level = 0) {
  auto paren = [&](const std::string& s, bool need) { return need ? "(" + s + ")" : s; };
  switch (f->kind()) {
    case FormKind::Atom:
      return f->name();
    case FormKind::Bottom:
      return "false";
    case FormKind::Top:
      return "true";
    case FormKind::MultUnit:
      return "emp";
    case FormKind::Not:
      return "not " + formula_str(f->kids()[0], 4);
    case FormKind::Diamond:
      return "<" + f->action().str() + "> " + formula_str(f->kids()[0], 4);
    case FormKind::Box:
      return "[" + f->action().str() + "] " + formula_str(f->kids()[0], 4);
    case FormKind::PrefBox:
      return "[pref " + f->name() + "] " + formula_str(f->kids()[0], 4);
    case FormKind::PrefDiamond:
      return "<pref " + f->name() + "> " + formula_str(f->kids()[0], 4);
    case FormKind::Star:
      return paren(formula_str(f->kids()[0], 4) + " * " + formula_str(f->kids()[1], 4), level > 3);
    case FormKind::And:
      return paren(formula_str(f->kids()[0], 3) + " and " + formula_str(f->kids()[1], 3), level > 2);
    case FormKind::Or:
      return paren(formula_str(f->kids()[0], 2) + " or " + formula_str(f->kids()[1], 2), level > 1);
    case FormKind::Implies:
      return paren(formula_str(f->kids()[0], 1) + " -> " + formula_str(f->kids()[1], 0), level > 0);
    case FormKind::Wand:
      return paren(formula_str(f->kids()[0], 1) + " -* " + formula_str(f->kids()[1], 0), level > 0);
  }
  return "?";
}

// Modal nesting depth, counting action and preference modalities.
inline int modal_depth(const FormulaPtr& f) {
  int sub = 0;
  for (const auto& k : f->kids()) sub = std::max(sub, modal_depth(k));
  switch (f->kind()) {
    case FormKind::Diamond:
    case FormKind::Box:
    case FormKind::PrefBox:
    case FormKind::PrefDiamond:
      return sub + 1;
    default:
      return sub;
  }
}

}  // namespace utiliproc
