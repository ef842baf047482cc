#pragma once

#include <set>
#include <string>
#include <vector>

#include "utiliproc/diagnostics.hpp"
#include "utiliproc/equivalence.hpp"
#include "utiliproc/logic.hpp"
#include "utiliproc/model.hpp"
#include "utiliproc/modification.hpp"
#include "utiliproc/universe.hpp"

namespace utiliproc {

namespace detail {

// Resource pool used by the algebraic spot checks: everything the model
// mentions plus pairwise compositions.
inline std::vector<Resource> validation_resources(const Model& m) {
  std::set<Resource> rs;
  rs.insert(Resource{});
  for (const auto& a : m.actions) {
    rs.insert(a.required);
    rs.insert(a.produced);
  }
  for (const auto& u : m.utilities)
    for (const auto& [k, v] : u.table) rs.insert(k.resource);
  for (const auto& f : m.mu_facts) rs.insert(f.at);
  std::set<Resource> all = rs;
  for (const auto& r : rs)
    for (const auto& s : rs)
      if (auto c = compose(r, s, m.atoms)) all.insert(*c);
  std::vector<Resource> out(all.begin(), all.end());
  if (out.size() > 24) out.resize(24);
  return out;
}

inline bool const_unguarded(const Model& m, const TermPtr& t) {
  // A constant occurrence not under any prefix, reachable through sums,
  // products and other constants' unguarded positions.
  std::set<std::string> visiting;
  auto walk = [&](auto&& self, const TermPtr& u) -> bool {
    switch (u->kind()) {
      case TermKind::Prefix:
        return false;
      case TermKind::Const: {
        if (visiting.count(u->label())) return true;
        const ProcessDef* d = m.find_process(u->label());
        if (!d) return false;  // unknown names are reported elsewhere
        visiting.insert(u->label());
        bool bad = self(self, d->body);
        visiting.erase(u->label());
        return bad;
      }
      default:
        for (const auto& k : u->kids())
          if (self(self, k)) return true;
        return false;
    }
  };
  return walk(walk, t);
}

}  // namespace detail

struct ValidationOptions {
  int bisim_depth = 3;
  int universe_cap = 40;
  Rat tolerance{0};
  bool deep_checks = true;  // obligations needing bisimulation runs
};

// Semantic validation of a parsed model: monoid spot checks, modification
// table consistency, process well-formedness and guardedness, and the
// utility/valuation obligations. Produces diagnostics; never throws on model
// content.
inline Diagnostics validate_model(const Model& m, const ValidationOptions& opt = {}) {
  Diagnostics diags;

  // Monoid laws on the mentioned resource universe: unit, commutativity,
  // associativity as defined-and-equal or both-undefined.
  std::vector<Resource> rs = detail::validation_resources(m);
  for (const auto& r : rs) {
    auto ru = compose(r, Resource{}, m.atoms);
    if (!ru || *ru != r)
      diags.error(0, 0, codes::kMonoidLaw, "unit law fails at " + r.str());
    for (const auto& s : rs) {
      auto rscomp = compose(r, s, m.atoms);
      auto srcomp = compose(s, r, m.atoms);
      if (rscomp.has_value() != srcomp.has_value() || (rscomp && *rscomp != *srcomp))
        diags.error(0, 0, codes::kMonoidLaw,
                    "commutativity fails at " + r.str() + ", " + s.str());
    }
  }
  for (std::size_t i = 0; i < rs.size() && i < 8; ++i)
    for (std::size_t j = 0; j < rs.size() && j < 8; ++j)
      for (std::size_t k = 0; k < rs.size() && k < 8; ++k) {
        auto ij = compose(rs[i], rs[j], m.atoms);
        auto jk = compose(rs[j], rs[k], m.atoms);
        std::optional<Resource> l, r2;
        if (ij) l = compose(*ij, rs[k], m.atoms);
        if (jk) r2 = compose(rs[i], *jk, m.atoms);
        if (l.has_value() != r2.has_value() || (l && *l != *r2))
          diags.error(0, 0, codes::kMonoidLaw,
                      "associativity fails at " + rs[i].str() + ", " + rs[j].str() + ", " +
                          rs[k].str());
      }

  // Action specs: produced parts must be resources at all.
  for (const auto& a : m.actions) {
    if (!m.atoms.valid(a.produced))
      diags.error(0, 0, codes::kMuProducedInvalid,
                  "action " + a.name + " produces " + a.produced.str() +
                      ", which exceeds atom capacities");
    if (!m.atoms.valid(a.required))
      diags.error(0, 0, codes::kMuProducedInvalid,
                  "action " + a.name + " requires " + a.required.str() +
                      ", which exceeds atom capacities");
  }

  // Empirical homomorphism check on the induced extension.
  for (const auto& a : m.actions) {
    for (const auto& b : m.actions) {
      Action ab = Action(a.name).times(Action(b.name));
      for (const auto& r : rs) {
        for (const auto& s : rs) {
          auto rstot = compose(r, s, m.atoms);
          if (!rstot) continue;
          auto mar = mu_apply(m, Action(a.name), r);
          auto mbs = mu_apply(m, Action(b.name), s);
          if (!mar || !mbs) continue;
          auto sides = compose(*mar, *mbs, m.atoms);
          if (!sides) continue;
          auto joint = mu_apply(m, ab, *rstot);
          if (!joint || *joint != *sides)
            diags.error(0, 0, codes::kMuHomomorphism,
                        "mu(" + ab.str() + ", " + rstot->str() + ") disagrees with mu(" + a.name +
                            ", " + r.str() + ") o mu(" + b.name + ", " + s.str() + ")");
        }
      }
    }
  }

  // Explicit mu facts are transcription checks against the induced table.
  for (const auto& f : m.mu_facts) {
    bool undeclared = false;
    for (const auto& factor : f.action.factors())
      if (!m.find_action(factor)) undeclared = true;
    if (undeclared) continue;  // already reported as UNKNOWN_NAME
    if (f.action.factors().size() > 1) {
      // A composite fact needs a split of its resource that satisfies every
      // factor's requirement; overlapping requirements make that impossible.
      auto need = rho(m, f.action);
      if (!need || !f.at.includes(*need)) {
        diags.error(f.line, f.col, codes::kMuSplitOverlap,
                    "no resource split of " + f.at.str() + " supports " + f.action.str() +
                        "; the factors' requirements overlap");
        continue;
      }
    }
    auto induced = mu_apply(m, f.action, f.at);
    if (!induced)
      diags.error(f.line, f.col, codes::kMuHomomorphism,
                  "mu(" + f.action.str() + ", " + f.at.str() +
                      ") is undefined in the induced table but declared as " + f.result.str());
    else if (*induced != f.result)
      diags.error(f.line, f.col, codes::kMuHomomorphism,
                  "mu(" + f.action.str() + ", " + f.at.str() + ") = " + induced->str() +
                      " by the homomorphism law, but is declared as " + f.result.str());
  }

  // Process bodies: well-formed, and recursion guarded by prefixes.
  for (const auto& p : m.processes) {
    auto wf = well_formed(p.body);
    if (!wf.ok)
      diags.error(0, 0, codes::kIllFormedTerm, "process " + p.name + ": " + wf.why);
    if (detail::const_unguarded(m, p.body))
      diags.error(0, 0, codes::kUnguardedRecursion,
                  "process " + p.name + " reaches a constant without passing an action prefix");
  }
  for (const auto& u : m.universes)
    for (const auto& c : u.contexts)
      if (!well_formed(c.process).ok)
        diags.error(0, 0, codes::kIllFormedTerm,
                    "universe " + u.name + " member " + c.str() + " is ill-formed");

  if (diags.has_errors() || !opt.deep_checks) {
    diags.sort();
    return diags;
  }

  // Obligations that need the bounded equivalence machinery. Quantify over
  // the declared universes when present, else over an auto-generated one.
  std::vector<ContextUniverse> universes;
  if (m.universes.empty()) {
    universes.push_back(auto_universe(m, opt.universe_cap));
  } else {
    for (const auto& decl : m.universes) universes.push_back(build_universe(m, decl));
  }

  for (const auto& uni : universes) {
    if (uni.resources.empty()) continue;
    EquivalenceChecker chk(m, uni, opt.bisim_depth + 2);

    for (const auto& u : m.utilities) {
      ObligationReport r1 = check_respects_bisim(chk, u, opt.bisim_depth, opt.tolerance);
      ObligationReport r2 = check_table_keys(chk, u, opt.bisim_depth, opt.tolerance);
      for (const auto& v : r1.violations)
        diags.warning(0, 0, codes::kRespectsBisim, v.what + " (universe " + uni.name + ")");
      for (const auto& v : r2.violations)
        diags.warning(0, 0, codes::kRespectsBisim, v.what + " (universe " + uni.name + ")");
    }

    std::vector<const UtilitySpec*> us;
    for (const auto& u : m.utilities) us.push_back(&u);
    if (!us.empty()) {
      AccordanceReport acc = check_accordance(chk, us, opt.tolerance);
      for (const auto& [cond, what] : acc.violations) {
        const char* code = cond == 1   ? codes::kAccordanceC1
                           : cond == 2 ? codes::kAccordanceC2
                           : cond == 3 ? codes::kAccordanceC3
                                       : codes::kAccordanceC4;
        diags.warning(0, 0, code, what + " (universe " + uni.name + ")");
      }
    }

    for (const auto& prop : m.valuation) {
      ObligationReport r = check_valuation(chk, prop, opt.bisim_depth);
      for (const auto& v : r.violations)
        diags.warning(0, 0, codes::kValuationNotClosed, v.what + " (universe " + uni.name + ")");
    }
  }

  diags.sort();
  return diags;
}

}  // namespace utiliproc
