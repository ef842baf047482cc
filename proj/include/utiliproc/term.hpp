#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "utiliproc/action.hpp"

namespace utiliproc {

// The neutral utility: its function is identically zero and a sum indexed by
// it is the plain nondeterministic sum.
inline const std::string kNeutralUtility = "0";

enum class TermKind { Unit, Hole, Prefix, Sum, Product, Const };

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Process terms. Immutable; shared freely between contexts.
//
//   Unit      1
//   Hole      []
//   Prefix    a : E
//   Sum       sum[u] { E1; ...; En }   (n = 0 with neutral u is the zero process)
//   Product   E * F
//   Const     named process definition
class Term {
 public:
  static TermPtr unit() {
    static TermPtr t = std::make_shared<Term>(TermKind::Unit);
    return t;
  }
  static TermPtr hole() {
    static TermPtr t = std::make_shared<Term>(TermKind::Hole);
    return t;
  }
  static TermPtr zero() {
    static TermPtr t = sum(kNeutralUtility, {});
    return t;
  }
  static TermPtr prefix(Action a, TermPtr body) {
    auto t = std::make_shared<Term>(TermKind::Prefix);
    t->action_ = std::move(a);
    t->kids_.push_back(std::move(body));
    return t;
  }
  static TermPtr sum(std::string utility, std::vector<TermPtr> branches) {
    auto t = std::make_shared<Term>(TermKind::Sum);
    t->label_ = std::move(utility);
    t->kids_ = std::move(branches);
    return t;
  }
  static TermPtr product(TermPtr left, TermPtr right) {
    auto t = std::make_shared<Term>(TermKind::Product);
    t->kids_.push_back(std::move(left));
    t->kids_.push_back(std::move(right));
    return t;
  }
  static TermPtr constant(std::string name) {
    auto t = std::make_shared<Term>(TermKind::Const);
    t->label_ = std::move(name);
    return t;
  }

  explicit Term(TermKind k) : kind_(k) {}

  TermKind kind() const { return kind_; }
  const Action& action() const { return action_; }
  const std::string& label() const { return label_; }
  const std::vector<TermPtr>& kids() const { return kids_; }

  bool is_zero() const { return kind_ == TermKind::Sum && kids_.empty(); }

 private:
  TermKind kind_;
  Action action_;              // Prefix
  std::string label_;          // Sum: utility name; Const: definition name
  std::vector<TermPtr> kids_;  // Prefix: body; Sum: branches; Product: two factors
};

inline int term_cmp(const Term& a, const Term& b);

inline int term_cmp(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return 0;
  return term_cmp(*a, *b);
}

inline int term_cmp(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  if (a.action() != b.action()) return a.action() < b.action() ? -1 : 1;
  if (a.label() != b.label()) return a.label() < b.label() ? -1 : 1;
  if (a.kids().size() != b.kids().size()) return a.kids().size() < b.kids().size() ? -1 : 1;
  for (std::size_t i = 0; i < a.kids().size(); ++i)
    if (int c = term_cmp(a.kids()[i], b.kids()[i]); c != 0) return c;
  return 0;
}

inline bool term_eq(const TermPtr& a, const TermPtr& b) { return term_cmp(a, b) == 0; }

struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return term_cmp(a, b) < 0; }
};

inline int hole_count(const TermPtr& t) {
  if (t->kind() == TermKind::Hole) return 1;
  int n = 0;
  for (const auto& k : t->kids()) n += hole_count(k);
  return n;
}

inline bool term_closed(const TermPtr& t) { return hole_count(t) == 0; }

inline bool has_guarded_hole(const TermPtr& t, bool under_prefix = false) {
  if (t->kind() == TermKind::Hole) return under_prefix;
  for (const auto& k : t->kids())
    if (has_guarded_hole(k, under_prefix || t->kind() == TermKind::Prefix)) return true;
  return false;
}

struct WellFormed {
  bool ok;
  std::string why;  // empty when ok
};

// At most one hole, and no hole under an action prefix.
inline WellFormed well_formed(const TermPtr& t) {
  int holes = hole_count(t);
  if (holes > 1) return {false, "more than one hole"};
  if (holes == 1 && has_guarded_hole(t)) return {false, "hole guarded by an action prefix"};
  return {true, ""};
}

// Replace every hole in e by f.
inline TermPtr substitute(const TermPtr& e, const TermPtr& f) {
  switch (e->kind()) {
    case TermKind::Unit:
    case TermKind::Const:
      return e;
    case TermKind::Hole:
      return f;
    case TermKind::Prefix: {
      TermPtr body = substitute(e->kids()[0], f);
      if (body.get() == e->kids()[0].get()) return e;
      return Term::prefix(e->action(), body);
    }
    case TermKind::Sum: {
      bool changed = false;
      std::vector<TermPtr> kids;
      kids.reserve(e->kids().size());
      for (const auto& k : e->kids()) {
        kids.push_back(substitute(k, f));
        changed |= kids.back().get() != k.get();
      }
      if (!changed) return e;
      return Term::sum(e->label(), std::move(kids));
    }
    case TermKind::Product: {
      TermPtr l = substitute(e->kids()[0], f);
      TermPtr r = substitute(e->kids()[1], f);
      if (l.get() == e->kids()[0].get() && r.get() == e->kids()[1].get()) return e;
      return Term::product(l, r);
    }
  }
  return e;
}

// Normal form used for utility-table keys and structural caching: products
// and sum branches are flattened and sorted, unit factors and zero branches
// dropped, singleton sums collapsed, empty sums become the zero process.
inline TermPtr canonicalize(const TermPtr& t) {
  switch (t->kind()) {
    case TermKind::Unit:
    case TermKind::Hole:
    case TermKind::Const:
      return t;
    case TermKind::Prefix:
      return Term::prefix(t->action(), canonicalize(t->kids()[0]));
    case TermKind::Product: {
      std::vector<TermPtr> factors;
      auto gather = [&](auto&& self, const TermPtr& u) -> void {
        if (u->kind() == TermKind::Product) {
          self(self, u->kids()[0]);
          self(self, u->kids()[1]);
          return;
        }
        TermPtr c = canonicalize(u);
        if (c->kind() == TermKind::Unit) return;  // E * 1 = E
        factors.push_back(c);
      };
      gather(gather, t);
      if (factors.empty()) return Term::unit();
      std::sort(factors.begin(), factors.end(), TermLess{});
      TermPtr out = factors[0];
      for (std::size_t i = 1; i < factors.size(); ++i) out = Term::product(out, factors[i]);
      return out;
    }
    case TermKind::Sum: {
      std::vector<TermPtr> branches;
      auto gather = [&](auto&& self, const TermPtr& u) -> void {
        for (const auto& k : u->kids()) {
          TermPtr c = canonicalize(k);
          if (c->is_zero()) continue;  // E + 0 = E
          if (c->kind() == TermKind::Sum && c->label() == t->label()) {
            self(self, c);
            continue;
          }
          branches.push_back(c);
        }
      };
      gather(gather, t);
      if (branches.empty()) return Term::zero();
      if (branches.size() == 1) return branches[0];
      std::sort(branches.begin(), branches.end(), TermLess{});
      return Term::sum(t->label(), std::move(branches));
    }
  }
  return t;
}

// Pretty printing. Levels: sum < product < prefix < atom; the printed form
// re-parses to an equal term.
inline std::string term_str(const TermPtr& t, int level = 0) {
  auto paren = [&](const std::string& s, bool need) { return need ? "(" + s + ")" : s; };
  switch (t->kind()) {
    case TermKind::Unit:
      return "1";
    case TermKind::Hole:
      return "[]";
    case TermKind::Const:
      return t->label();
    case TermKind::Prefix:
      return paren(t->action().str() + " : " + term_str(t->kids()[0], 2), level > 2);
    case TermKind::Product:
      return paren(term_str(t->kids()[0], 1) + " * " + term_str(t->kids()[1], 2), level > 1);
    case TermKind::Sum: {
      if (t->kids().empty() && t->label() == kNeutralUtility) return "0";
      if (t->kids().size() == 2) {
        std::string op = t->label() == kNeutralUtility ? " + " : " +[" + t->label() + "] ";
        return paren(term_str(t->kids()[0], 1) + op + term_str(t->kids()[1], 1), level > 0);
      }
      std::string out = "sum[" + t->label() + "] { ";
      for (std::size_t i = 0; i < t->kids().size(); ++i) {
        if (i) out += "; ";
        out += term_str(t->kids()[i], 0);
      }
      out += t->kids().empty() ? "}" : " }";
      return out;
    }
  }
  return "?";
}

// All distinct subterms, including t itself, in canonical print order.
inline void collect_subterms(const TermPtr& t, std::set<TermPtr, TermLess>& out) {
  out.insert(t);
  for (const auto& k : t->kids()) collect_subterms(k, out);
}

inline std::vector<TermPtr> subterms(const TermPtr& t) {
  std::set<TermPtr, TermLess> acc;
  collect_subterms(t, acc);
  return {acc.begin(), acc.end()};
}

}  // namespace utiliproc
