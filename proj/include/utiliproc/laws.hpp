#pragma once

#include <string>
#include <vector>

#include "utiliproc/equivalence.hpp"

namespace utiliproc {

struct LawInstance {
  std::string left, right;
  bool related = false;
  std::vector<std::string> counterexample;
};

struct LawResult {
  int number = 0;
  std::string name;
  int checked = 0;
  bool holds = true;
  std::vector<LawInstance> failures;
};

// The eight algebraic laws of choice and product, checked as bounded-bisim
// facts over instances drawn from the universe's term pool. They are
// theorems only for accordant utility sets; a failing instance pinpoints the
// utility that breaks accordance.
inline std::vector<LawResult> check_laws(EquivalenceChecker& chk, int depth, int max_terms = 4) {
  const Model& m = chk.model();
  std::vector<TermPtr> ts = chk.universe().terms;
  if (static_cast<int>(ts.size()) > max_terms) ts.resize(max_terms);
  if (ts.empty()) ts.push_back(Term::unit());

  std::vector<std::string> us = {kNeutralUtility};
  for (const auto& u : m.utilities) us.push_back(u.name);

  std::vector<LawResult> out;
  auto run = [&](int number, const std::string& name, auto&& instances) {
    LawResult r;
    r.number = number;
    r.name = name;
    for (const auto& [l, rgt] : instances()) {
      ++r.checked;
      EquivalenceVerdict v = chk.bisim(l, rgt, depth);
      if (!v.related) {
        r.holds = false;
        r.failures.push_back({term_str(l), term_str(rgt), false, v.counterexample});
      }
    }
    out.push_back(std::move(r));
  };

  using Pair = std::pair<TermPtr, TermPtr>;

  run(1, "sum-commutative", [&] {
    std::vector<Pair> ps;
    for (const auto& u : us)
      for (const auto& e : ts)
        for (const auto& f : ts)
          ps.push_back({Term::sum(u, {e, f}), Term::sum(u, {f, e})});
    return ps;
  });
  run(2, "sum-associative", [&] {
    std::vector<Pair> ps;
    for (const auto& u : us)
      for (const auto& e : ts)
        for (const auto& f : ts)
          for (const auto& g : ts)
            ps.push_back({Term::sum(u, {e, Term::sum(u, {f, g})}),
                          Term::sum(u, {Term::sum(u, {e, f}), g})});
    return ps;
  });
  run(3, "sum-unit-zero", [&] {
    std::vector<Pair> ps;
    for (const auto& u : us)
      for (const auto& e : ts) ps.push_back({Term::sum(u, {e, Term::zero()}), e});
    return ps;
  });
  run(4, "product-annihilator", [&] {
    std::vector<Pair> ps;
    for (const auto& e : ts) ps.push_back({Term::product(e, Term::zero()), Term::zero()});
    return ps;
  });
  run(5, "product-unit", [&] {
    std::vector<Pair> ps;
    for (const auto& e : ts) ps.push_back({Term::product(e, Term::unit()), e});
    return ps;
  });
  run(6, "product-commutative", [&] {
    std::vector<Pair> ps;
    for (const auto& e : ts)
      for (const auto& f : ts) ps.push_back({Term::product(e, f), Term::product(f, e)});
    return ps;
  });
  run(7, "product-associative", [&] {
    std::vector<Pair> ps;
    for (const auto& e : ts)
      for (const auto& f : ts)
        for (const auto& g : ts)
          ps.push_back({Term::product(e, Term::product(f, g)),
                        Term::product(Term::product(e, f), g)});
    return ps;
  });
  run(8, "product-distributes-over-sum", [&] {
    std::vector<Pair> ps;
    for (const auto& u : us)
      for (const auto& e : ts)
        for (const auto& f : ts)
          for (const auto& g : ts)
            ps.push_back({Term::product(Term::sum(u, {e, f}), g),
                          Term::sum(u, {Term::product(e, g), Term::product(f, g)})});
    return ps;
  });
  return out;
}

}  // namespace utiliproc
