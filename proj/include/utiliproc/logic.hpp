#pragma once

#include <optional>
#include <string>
#include <vector>

#include "utiliproc/equivalence.hpp"
#include "utiliproc/formula.hpp"
#include "utiliproc/semantics.hpp"

namespace utiliproc {

enum class SatMode { Global, Local };

// Quantification domain and bounds for one satisfaction run.
struct CheckConfig {
  SatMode mode = SatMode::Global;
  int depth = 8;        // constant unfolding bound
  int bisim_depth = 3;  // bound for the equivalences behind emp and *
  Rat tolerance{0};
};

struct SatResult {
  bool holds = false;
  // Witness sketch for the outermost connective: for a diamond, the joint
  // pair taken; for a box, the violating pair; for quantifiers, the context.
  std::vector<std::string> witness;
};

class Satisfaction {
 public:
  Satisfaction(EquivalenceChecker& chk, CheckConfig cfg) : chk_(chk), cfg_(cfg) {}

  SatResult check(const Context& primary, const Context& surrounding, const FormulaPtr& f) {
    if (primary.open()) throw ModelError("primary context of a satisfaction query must be closed");
    SatResult r;
    r.holds = sat(primary, surrounding, f, &r.witness);
    return r;
  }

 private:
  const Model& model() const { return chk_.model(); }

  bool needs_universe(const FormulaPtr& f) const {
    switch (f->kind()) {
      case FormKind::Wand:
      case FormKind::Star:
      case FormKind::PrefBox:
      case FormKind::PrefDiamond:
        return true;
      default:
        return false;
    }
  }

  bool sat(const Context& c, const Context& sur, const FormulaPtr& f,
           std::vector<std::string>* wit = nullptr) {
    if (needs_universe(f) && chk_.universe().closed.empty())
      throw ModelError("formula needs a nonempty universe: " + formula_str(f));
    switch (f->kind()) {
      case FormKind::Top:
        return true;
      case FormKind::Bottom:
        return false;
      case FormKind::Atom: {
        const AtomProp* p = model().find_atomprop(f->name());
        if (!p) throw ModelError("undeclared atomic proposition: " + f->name());
        auto world = substitute_context(sur, c, model().atoms);
        if (!world) return false;
        Context key = canonicalize(*world);
        for (const auto& mbr : p->members)
          if (context_eq(mbr, key)) return true;
        return false;
      }
      case FormKind::Not:
        return !sat(c, sur, f->kids()[0]);
      case FormKind::And:
        return sat(c, sur, f->kids()[0]) && sat(c, sur, f->kids()[1]);
      case FormKind::Or:
        return sat(c, sur, f->kids()[0]) || sat(c, sur, f->kids()[1]);
      case FormKind::Implies:
        return !sat(c, sur, f->kids()[0]) || sat(c, sur, f->kids()[1]);
      case FormKind::Diamond: {
        for (const auto& js : joint_step(model(), c, sur, cfg_.depth)) {
          if (js.primary.action != f->action()) continue;
          if (sat(js.primary.target, js.surrounding.target, f->kids()[0])) {
            if (wit)
              wit->push_back("pair: primary " + js.primary.action.str() + " -> " +
                             js.primary.target.str() + "; surrounding " +
                             js.surrounding.action.str() + " -> " + js.surrounding.target.str());
            return true;
          }
        }
        return false;
      }
      case FormKind::Box: {
        for (const auto& js : joint_step(model(), c, sur, cfg_.depth)) {
          if (js.primary.action != f->action()) continue;
          if (!sat(js.primary.target, js.surrounding.target, f->kids()[0])) {
            if (wit)
              wit->push_back("violating pair: primary " + js.primary.action.str() + " -> " +
                             js.primary.target.str() + "; surrounding " +
                             js.surrounding.action.str() + " -> " + js.surrounding.target.str());
            return false;
          }
        }
        return true;
      }
      case FormKind::MultUnit: {
        if (cfg_.mode == SatMode::Local)
          return chk_.local_equiv_pair(sur, c, sur, unit_context(), cfg_.bisim_depth).related;
        return c.resource.empty() && chk_.bisim(c.process, Term::unit(), cfg_.bisim_depth).related;
      }
      case FormKind::Star:
        return sat_star(c, sur, f, wit);
      case FormKind::Wand: {
        for (const auto& sf : chk_.universe().closed) {
          auto joined = compose(c.resource, sf.resource, model().atoms);
          if (!joined) continue;
          if (!sat(sf, sur, f->kids()[0])) continue;
          Context combined{*joined, Term::product(c.process, sf.process)};
          if (!sat(combined, sur, f->kids()[1])) {
            if (wit) wit->push_back("failing extension: " + sf.str());
            return false;
          }
        }
        return true;
      }
      case FormKind::PrefBox:
      case FormKind::PrefDiamond: {
        auto world = substitute_context(sur, c, model().atoms);
        if (!world || world->open())
          throw ModelError("preference modality needs a closed wrapped world");
        Rat here = utility_eval(model(), f->name(), *world);
        bool diamond = f->kind() == FormKind::PrefDiamond;
        std::vector<Context> others = {c};  // a context always compares with itself
        for (const auto& u : chk_.universe().closed) others.push_back(u);
        for (const auto& other : others) {
          auto w2 = substitute_context(sur, other, model().atoms);
          if (!w2 || w2->open()) continue;
          if (!rat_leq(here, utility_eval(model(), f->name(), *w2), cfg_.tolerance)) continue;
          bool holds_there = sat(other, sur, f->kids()[0]);
          if (diamond && holds_there) {
            if (wit) wit->push_back("preferred context: " + other.str());
            return true;
          }
          if (!diamond && !holds_there) {
            if (wit) wit->push_back("preferred counterexample: " + other.str());
            return false;
          }
        }
        return !diamond;
      }
    }
    return false;
  }

  // Decompositions (F, G) with E ~ F x G drawn from the canonical product
  // structure of E, always including the unit paddings E x 1 and 1 x E.
  std::vector<std::pair<TermPtr, TermPtr>> decompositions(const TermPtr& e) {
    std::vector<TermPtr> factors;
    auto gather = [&](auto&& self, const TermPtr& t) -> void {
      if (t->kind() == TermKind::Product) {
        self(self, t->kids()[0]);
        self(self, t->kids()[1]);
        return;
      }
      factors.push_back(t);
    };
    gather(gather, canonicalize(e));
    std::vector<std::pair<TermPtr, TermPtr>> out;
    std::size_t n = factors.size();
    if (n > 10) n = 10;  // decomposition search is exponential in factor count
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<TermPtr> left, right;
      for (std::size_t i = 0; i < n; ++i)
        (mask & (1u << i) ? left : right).push_back(factors[i]);
      auto build = [](const std::vector<TermPtr>& fs) -> TermPtr {
        if (fs.empty()) return Term::unit();
        TermPtr t = fs[0];
        for (std::size_t i = 1; i < fs.size(); ++i) t = Term::product(t, fs[i]);
        return t;
      };
      out.emplace_back(build(left), build(right));
    }
    return out;
  }

  bool sat_star(const Context& c, const Context& sur, const FormulaPtr& f,
                std::vector<std::string>* wit) {
    auto try_parts = [&](const Resource& s, const TermPtr& fp, const Resource& t,
                         const TermPtr& gp) -> bool {
      auto wrap_right = substitute_context(sur, Context{t, Term::product(Term::hole(), gp)},
                                           model().atoms);
      auto wrap_left = substitute_context(sur, Context{s, Term::product(fp, Term::hole())},
                                          model().atoms);
      if (!wrap_right || !wrap_left) return false;
      if (!sat(Context{s, fp}, *wrap_right, f->kids()[0])) return false;
      if (!sat(Context{t, gp}, *wrap_left, f->kids()[1])) return false;
      if (wit)
        wit->push_back("split: (" + s.str() + " ; " + term_str(fp) + ") * (" + t.str() + " ; " +
                       term_str(gp) + ")");
      return true;
    };

    if (cfg_.mode == SatMode::Global) {
      for (const auto& [fp, gp] : decompositions(c.process))
        for (const auto& [s, t] : two_splits(c.resource))
          if (try_parts(s, fp, t, gp)) return true;
      return false;
    }

    // Local mode: search recombined worlds locally equivalent to this one.
    std::vector<Context> candidates = {c};
    for (const auto& u : chk_.universe().closed) candidates.push_back(u);
    for (const auto& cand : candidates) {
      for (const auto& [fp, gp] : decompositions(cand.process)) {
        for (const auto& [s, t] : two_splits(cand.resource)) {
          Context recombined{cand.resource, Term::product(fp, gp)};
          if (!chk_.local_equiv_pair(sur, c, sur, recombined, cfg_.bisim_depth).related) continue;
          if (try_parts(s, fp, t, gp)) return true;
        }
      }
    }
    return false;
  }

  EquivalenceChecker& chk_;
  CheckConfig cfg_;
};

// Validation of the valuation: every atom set must be closed under bounded
// bisimilarity over the universe.
inline ObligationReport check_valuation(EquivalenceChecker& chk, const AtomProp& prop, int depth) {
  ObligationReport rep;
  for (const auto& mbr : prop.members) {
    for (const auto& ctx : chk.universe().closed) {
      if (ctx.resource != mbr.resource) continue;
      bool in_set = false;
      Context key = canonicalize(ctx);
      for (const auto& m2 : prop.members) in_set |= context_eq(m2, key);
      if (in_set) continue;
      if (chk.bisim_contexts(mbr, ctx, depth).related)
        rep.violations.push_back({"atom " + prop.name + " contains " + mbr.str() +
                                  " but misses the bisimilar " + ctx.str()});
    }
  }
  return rep;
}

// The security-level pattern: attacker-spec -* [d][pref v](not <a> true).
inline FormulaPtr security_level_formula(const FormulaPtr& attacker_spec, const Action& defence,
                                         const std::string& attacker_utility,
                                         const Action& attack) {
  return Formula::wand(
      attacker_spec,
      Formula::box(defence, Formula::pref_box(attacker_utility,
                                              Formula::lnot(Formula::diamond(attack, Formula::top())))));
}

inline SatResult security_level_query(EquivalenceChecker& chk, const CheckConfig& cfg,
                                      const Context& primary, const Context& surrounding,
                                      const FormulaPtr& attacker_spec, const Action& defence,
                                      const std::string& attacker_utility, const Action& attack) {
  Satisfaction sat(chk, cfg);
  return sat.check(primary, surrounding,
                   security_level_formula(attacker_spec, defence, attacker_utility, attack));
}

}  // namespace utiliproc
