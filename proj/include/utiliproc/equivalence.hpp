#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "utiliproc/semantics.hpp"
#include "utiliproc/universe.hpp"

namespace utiliproc {

struct EquivalenceVerdict {
  bool related = true;
  int depth = 0;
  std::vector<std::string> counterexample;  // nonempty iff not related
};

// Bounded bisimilarity and local equivalence over a finite universe.
// Verdicts read "related at depth d over universe U": refutations are sound,
// affirmations are bounded. Depth-0 relates everything; at depth k+1 every
// transition under every quantified (resource, outer, inner) tuple must be
// matched with depth-k-related targets and equal resources.
class EquivalenceChecker {
 public:
  EquivalenceChecker(const Model& m, const ContextUniverse& u, int unfold_depth)
      : model_(m), universe_(u), unfold_depth_(unfold_depth) {
    if (u.contexts.empty() || u.resources.empty()) throw ModelError("empty context universe");
  }

  EquivalenceVerdict bisim(const TermPtr& e, const TermPtr& f, int depth) {
    EquivalenceVerdict v;
    v.depth = depth;
    std::vector<std::string> why;
    v.related = related(e, f, depth, &why);
    v.counterexample = std::move(why);
    return v;
  }

  EquivalenceVerdict bisim_contexts(const Context& a, const Context& b, int depth) {
    EquivalenceVerdict v;
    v.depth = depth;
    if (a.resource != b.resource) {
      v.related = false;
      v.counterexample.push_back("resources differ: " + a.resource.str() + " vs " +
                                 b.resource.str());
      return v;
    }
    std::vector<std::string> why;
    v.related = related(a.process, b.process, depth, &why);
    v.counterexample = std::move(why);
    return v;
  }

  // Local equivalence on triples (outer, primary, inner); condition 3 makes
  // it require equal primary resources.
  EquivalenceVerdict local_equiv(const Context& c1, const Context& a, const Context& d1,
                                 const Context& c2, const Context& b, const Context& d2,
                                 int depth) {
    EquivalenceVerdict v;
    v.depth = depth;
    std::vector<std::string> why;
    v.related = locally_related(c1, a, d1, c2, b, d2, depth, &why);
    v.counterexample = std::move(why);
    return v;
  }

  // Pair form: related for every closed inner context of the universe.
  EquivalenceVerdict local_equiv_pair(const Context& c1, const Context& a, const Context& c2,
                                      const Context& b, int depth) {
    EquivalenceVerdict v;
    v.depth = depth;
    for (const auto& d : inner_pool()) {
      EquivalenceVerdict t = local_equiv(c1, a, d, c2, b, d, depth);
      if (!t.related) {
        t.counterexample.insert(t.counterexample.begin(), "inner context " + d.str());
        return t;
      }
    }
    return v;
  }

  const ContextUniverse& universe() const { return universe_; }
  const Model& model() const { return model_; }
  int unfold_depth() const { return unfold_depth_; }

  // Transition sets are cached. Terms whose transition set cannot depend on
  // the annotations (no hole, no utility-indexed sum anywhere relevant) are
  // stored once under the empty annotations.
  const TransitionSet& transitions(const Context& c, const Context& outer, const Context& inner) {
    bool sens = context_sensitive(c.process);
    TransKey key{c.process, c.resource, sens ? outer : empty_context(),
                 sens ? inner : empty_context()};
    auto it = transition_cache_.find(key);
    if (it != transition_cache_.end()) return it->second;
    TransitionSet set = enumerate_transitions(model_, c, key.outer, key.inner, unfold_depth_);
    return transition_cache_.emplace(std::move(key), std::move(set)).first->second;
  }

  // Whether the transition set of a term can vary with the outer or inner
  // annotation: holes always can, utility-indexed sums can through the
  // side-condition, and the property propagates through branches, factors
  // and constants. Prefixes screen their bodies off.
  bool context_sensitive(const TermPtr& t) {
    auto it = sensitive_.find(t);
    if (it != sensitive_.end()) return it->second;
    bool s = false;
    switch (t->kind()) {
      case TermKind::Unit:
      case TermKind::Prefix:
        s = false;
        break;
      case TermKind::Hole:
        s = true;
        break;
      case TermKind::Sum:
        if (t->label() != kNeutralUtility) {
          s = true;
        } else {
          for (const auto& k : t->kids()) s = s || context_sensitive(k);
        }
        break;
      case TermKind::Product:
        s = context_sensitive(t->kids()[0]) || context_sensitive(t->kids()[1]);
        break;
      case TermKind::Const: {
        if (visiting_.count(t->label())) {
          s = false;  // guarded recursion: a cycle without prefixes is invalid anyway
          break;
        }
        const ProcessDef* d = model_.find_process(t->label());
        if (!d) {
          s = true;
          break;
        }
        visiting_.insert(t->label());
        s = context_sensitive(d->body);
        visiting_.erase(t->label());
        break;
      }
    }
    sensitive_.emplace(t, s);
    return s;
  }

 private:
  struct TransKey {
    TermPtr term;
    Resource resource;
    Context outer;
    Context inner;
  };
  struct TransKeyLess {
    bool operator()(const TransKey& a, const TransKey& b) const {
      if (int c = term_cmp(a.term, b.term); c != 0) return c < 0;
      if (a.resource != b.resource) return a.resource < b.resource;
      if (int c = context_cmp(a.outer, b.outer); c != 0) return c < 0;
      return context_cmp(a.inner, b.inner) < 0;
    }
  };
  struct PairKey {
    TermPtr left, right;
    int depth;
  };
  struct PairKeyLess {
    bool operator()(const PairKey& a, const PairKey& b) const {
      if (a.depth != b.depth) return a.depth < b.depth;
      if (int c = term_cmp(a.left, b.left); c != 0) return c < 0;
      return term_cmp(a.right, b.right) < 0;
    }
  };
  std::vector<Context> inner_pool() const {
    std::vector<Context> ds = {unit_context()};
    for (const auto& c : universe_.closed) {
      if (ds.size() >= 4) break;
      ds.push_back(c);
    }
    return ds;
  }

  bool related(const TermPtr& e, const TermPtr& f, int depth, std::vector<std::string>* why) {
    if (depth <= 0) return true;
    if (term_eq(e, f)) return true;
    PairKey key{e, f, depth};
    if (auto it = memo_.find(key); it != memo_.end()) {
      // a cached refutation is re-derived when a caller wants the path
      if (it->second || !why) return it->second;
    }
    bool ok = true;
    // When neither side is context-sensitive a single annotation suffices.
    bool sens = context_sensitive(e) || context_sensitive(f);
    std::vector<Context> outers = sens ? universe_.outers : std::vector<Context>{empty_context()};
    std::vector<Context> inners = sens ? universe_.inners : std::vector<Context>{empty_context()};
    for (const auto& r : universe_.resources) {
      for (const auto& outer : outers) {
        for (const auto& inner : inners) {
          const TransitionSet& te = transitions(Context{r, e}, outer, inner);
          const TransitionSet& tf = transitions(Context{r, f}, outer, inner);
          if (!matches(te, tf, depth, r, outer, e, f, why) ||
              !matches(tf, te, depth, r, outer, f, e, why)) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (!ok) break;
    }
    memo_[key] = ok;
    return ok;
  }

  bool matches(const TransitionSet& from, const TransitionSet& to, int depth, const Resource& r,
               const Context& outer, const TermPtr& e, const TermPtr& f,
               std::vector<std::string>* why) {
    for (const auto& t : from.items) {
      const Transition* near = nullptr;
      bool found = false;
      for (const auto& u : to.items) {
        if (t.action != u.action) continue;
        if (t.target.resource != u.target.resource) continue;
        if (!near) near = &u;
        if (related(t.target.process, u.target.process, depth - 1, nullptr)) {
          found = true;
          break;
        }
      }
      if (!found) {
        if (why) {
          why->push_back("at " + r.str() + " under outer " + outer.str() + ", " + term_str(e) +
                         " does " + t.action.str() + " -> " + t.target.str() + " unmatched by " +
                         term_str(f));
          // extend the distinguishing path through the nearest same-action
          // candidate, alternating sides as the depth unwinds
          if (near) related(t.target.process, near->target.process, depth - 1, why);
        }
        return false;
      }
    }
    return true;
  }

  bool locally_related(const Context& c1, const Context& a, const Context& d1, const Context& c2,
                       const Context& b, const Context& d2, int depth,
                       std::vector<std::string>* why) {
    if (a.resource != b.resource) {
      if (why) why->push_back("primary resources differ: " + a.resource.str() + " vs " + b.resource.str());
      return false;
    }
    if (depth <= 0) return true;
    auto key = std::make_tuple(c1.str() + "|" + a.str() + "|" + d1.str(),
                               c2.str() + "|" + b.str() + "|" + d2.str(), depth);
    if (auto it = local_memo_.find(key); it != local_memo_.end()) return it->second;
    bool ok = triple_matches(c1, a, d1, c2, b, d2, depth, why) &&
              triple_matches(c2, b, d2, c1, a, d1, depth, nullptr);
    local_memo_[key] = ok;
    return ok;
  }

  struct TripleStep {
    Transition prim, outer, inner;
  };

  std::vector<TripleStep> triple_steps(const Context& c, const Context& a, const Context& d) {
    std::vector<TripleStep> out;
    auto ad = substitute_context(a, d, model_.atoms);
    auto ca = substitute_context(c, a, model_.atoms);
    if (!ad || !ca) return out;
    const TransitionSet& ta = transitions(a, c, d);
    const TransitionSet& tc = transitions(c, empty_context(), *ad);
    const TransitionSet& td = transitions(d, *ca, empty_context());
    for (const auto& x : ta.items)
      for (const auto& y : tc.items)
        for (const auto& z : td.items) out.push_back({x, y, z});
    return out;
  }

  bool triple_matches(const Context& c1, const Context& a, const Context& d1, const Context& c2,
                      const Context& b, const Context& d2, int depth,
                      std::vector<std::string>* why) {
    for (const auto& s : triple_steps(c1, a, d1)) {
      bool found = false;
      for (const auto& t : triple_steps(c2, b, d2)) {
        if (s.prim.action != t.prim.action || s.outer.action != t.outer.action ||
            s.inner.action != t.inner.action)
          continue;
        if (locally_related(s.outer.target, s.prim.target, s.inner.target, t.outer.target,
                            t.prim.target, t.inner.target, depth - 1, nullptr)) {
          found = true;
          break;
        }
      }
      if (!found) {
        if (why)
          why->push_back("triple step (" + s.prim.action.str() + ", " + s.outer.action.str() +
                         ", " + s.inner.action.str() + ") of " + a.str() + " unmatched by " +
                         b.str());
        return false;
      }
    }
    return true;
  }

  const Model& model_;
  const ContextUniverse& universe_;
  int unfold_depth_;
  std::map<PairKey, bool, PairKeyLess> memo_;
  std::map<std::tuple<std::string, std::string, int>, bool> local_memo_;
  std::map<TransKey, TransitionSet, TransKeyLess> transition_cache_;
  std::map<TermPtr, bool, TermLess> sensitive_;
  std::set<std::string> visiting_;
};

struct ObligationViolation {
  std::string what;
};

struct ObligationReport {
  std::vector<ObligationViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Definition-1 obligation: bisimilar universe contexts must get equal values.
inline ObligationReport check_respects_bisim(EquivalenceChecker& chk, const UtilitySpec& u,
                                             int depth, const Rat& tolerance = Rat(0)) {
  ObligationReport rep;
  const auto& cs = chk.universe().closed;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (cs[i].resource != cs[j].resource) continue;
      Rat vi = utility_eval(chk.model(), u, cs[i]);
      Rat vj = utility_eval(chk.model(), u, cs[j]);
      if (rat_eq(vi, vj, tolerance)) continue;
      if (chk.bisim_contexts(cs[i], cs[j], depth).related)
        rep.violations.push_back({"utility " + u.name + " distinguishes bisimilar contexts " +
                                  cs[i].str() + " (" + rat_str(vi) + ") and " + cs[j].str() +
                                  " (" + rat_str(vj) + ")"});
    }
  }
  return rep;
}

// Also checks the table-key variant: keys identified by canonicalization or
// bounded bisimilarity must carry equal values.
inline ObligationReport check_table_keys(EquivalenceChecker& chk, const UtilitySpec& u, int depth,
                                         const Rat& tolerance = Rat(0)) {
  ObligationReport rep;
  for (std::size_t i = 0; i < u.table.size(); ++i) {
    for (std::size_t j = i + 1; j < u.table.size(); ++j) {
      const auto& [ci, vi] = u.table[i];
      const auto& [cj, vj] = u.table[j];
      if (ci.resource != cj.resource) continue;
      if (rat_eq(vi, vj, tolerance)) continue;
      if (chk.bisim_contexts(ci, cj, depth).related)
        rep.violations.push_back({"utility " + u.name + " table keys " + ci.str() + " and " +
                                  cj.str() + " are bisimilar but valued " + rat_str(vi) + " vs " +
                                  rat_str(vj)});
    }
  }
  return rep;
}

struct AccordanceReport {
  // one entry per violated instance, tagged with the condition number 1..4
  std::vector<std::pair<int, std::string>> violations;
  bool ok() const { return violations.empty(); }
  bool condition_ok(int n) const {
    for (const auto& [c, s] : violations)
      if (c == n) return false;
    return true;
  }
};

// Definition-2 conditions instantiated over the universe. Wrappers C range
// over the universe's outer pool; terms over its closed process pool.
inline AccordanceReport check_accordance(EquivalenceChecker& chk,
                                         const std::vector<const UtilitySpec*>& us,
                                         const Rat& tolerance = Rat(0)) {
  AccordanceReport rep;
  const Model& m = chk.model();
  // The conditions quantify over term triples; slice the pools so the
  // instance count stays polynomially small.
  auto slice = [](const auto& pool, std::size_t n) {
    return std::vector(pool.begin(), pool.begin() + std::min(pool.size(), n));
  };
  const auto terms = slice(chk.universe().terms, 8);
  const auto resources = slice(chk.universe().resources, 6);
  const auto wrappers = slice(chk.universe().outers, 5);

  auto value = [&](const UtilitySpec& u, const Context& wrapper, const Resource& r,
                   const TermPtr& t) -> std::optional<Rat> {
    auto world = substitute_context(wrapper, Context{r, t}, m.atoms);
    if (!world || world->open()) return std::nullopt;
    return utility_eval(m, u, *world);
  };

  for (const UtilitySpec* up : us) {
    const UtilitySpec& u = *up;
    for (const auto& wrapper : wrappers) {
      for (const auto& r : resources) {
        for (const auto& e : terms) {
          auto ue = value(u, wrapper, r, e);
          if (!ue) continue;
          // condition 3: the zero process is never strictly preferred
          auto uz = value(u, wrapper, r, Term::zero());
          if (uz && !rat_leq(*uz, *ue, tolerance))
            rep.violations.push_back(
                {3, "u(" + wrapper.str() + "(" + r.str() + ", 0)) = " + rat_str(*uz) + " > " +
                        rat_str(*ue) + " = u(.., " + term_str(e) + ")"});
          for (const auto& f : terms) {
            auto uf = value(u, wrapper, r, f);
            if (!uf) continue;
            for (const auto& g : terms) {
              auto ug = value(u, wrapper, r, g);
              if (!ug) continue;
              bool both = rat_leq(*uf, *ue, tolerance) && rat_leq(*ug, *ue, tolerance);
              // condition 1, quantified over the second utility symbol
              for (const UtilitySpec* vp : us) {
                auto usum = value(u, wrapper, r, Term::sum(vp->name, {f, g}));
                if (!usum) continue;
                if (both != rat_leq(*usum, *ue, tolerance)) {
                  rep.violations.push_back(
                      {1, "condition 1 fails for u=" + u.name + ", v=" + vp->name + " at " +
                              wrapper.str() + ", " + r.str() + " with E=" + term_str(e) +
                              ", F=" + term_str(f) + ", G=" + term_str(g)});
                }
              }
              // condition 2
              auto uef = value(u, wrapper, r, Term::sum(u.name, {e, f}));
              if (uef && both != rat_leq(*ug, *uef, tolerance)) {
                rep.violations.push_back(
                    {2, "condition 2 fails for u=" + u.name + " at " + wrapper.str() + ", " +
                            r.str() + " with E=" + term_str(e) + ", F=" + term_str(f) +
                            ", G=" + term_str(g)});
              }
              // condition 4: distributing product over choice preserves value
              auto lhs = value(u, wrapper, r,
                               Term::sum(u.name, {Term::product(e, g), Term::product(f, g)}));
              auto rhs = value(u, wrapper, r, Term::product(Term::sum(u.name, {e, f}), g));
              if (lhs && rhs && !rat_eq(*lhs, *rhs, tolerance)) {
                rep.violations.push_back(
                    {4, "condition 4 fails for u=" + u.name + " at " + wrapper.str() + ", " +
                            r.str() + " with E=" + term_str(e) + ", F=" + term_str(f) +
                            ", G=" + term_str(g)});
              }
            }
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace utiliproc
