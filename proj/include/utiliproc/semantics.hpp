#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "utiliproc/context.hpp"
#include "utiliproc/model.hpp"
#include "utiliproc/modification.hpp"

namespace utiliproc {

enum class Rule { Tick, Prefix, Hole, Sum, Prod };

inline std::string rule_str(Rule r) {
  switch (r) {
    case Rule::Tick: return "TICK";
    case Rule::Prefix: return "PREFIX";
    case Rule::Hole: return "HOLE";
    case Rule::Sum: return "SUM";
    case Rule::Prod: return "PROD";
  }
  return "?";
}

// Utility comparison recorded at a sum: one row per branch, with the chosen
// branch's value having to dominate every other row.
struct SumCheck {
  std::string utility;
  int chosen = -1;
  std::vector<std::pair<TermPtr, Rat>> branch_values;  // branch term, value
};

// Derivation-tree tag for one transition.
struct RuleTrace {
  Rule rule;
  std::optional<SumCheck> sum;                          // Sum
  std::optional<std::pair<Resource, Resource>> split;   // Prod resource split
  std::vector<RuleTrace> premises;
};

inline int rule_trace_cmp(const RuleTrace& a, const RuleTrace& b) {
  if (a.rule != b.rule) return static_cast<int>(a.rule) < static_cast<int>(b.rule) ? -1 : 1;
  int ac = a.sum ? a.sum->chosen : -1;
  int bc = b.sum ? b.sum->chosen : -1;
  if (ac != bc) return ac < bc ? -1 : 1;
  auto as = a.split ? *a.split : std::pair<Resource, Resource>{};
  auto bs = b.split ? *b.split : std::pair<Resource, Resource>{};
  if (as != bs) return as < bs ? -1 : 1;
  if (a.premises.size() != b.premises.size()) return a.premises.size() < b.premises.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.premises.size(); ++i)
    if (int c = rule_trace_cmp(a.premises[i], b.premises[i]); c != 0) return c;
  return 0;
}

struct Transition {
  Action action;
  Context source;
  Context target;
  Context outer;
  Context inner;
  RuleTrace trace;
};

inline int transition_cmp(const Transition& a, const Transition& b) {
  if (a.action != b.action) return a.action < b.action ? -1 : 1;
  if (int c = context_cmp(a.target, b.target); c != 0) return c;
  return rule_trace_cmp(a.trace, b.trace);
}

struct TransitionSet {
  std::vector<Transition> items;
  bool truncated = false;  // a constant hit the unfolding bound

  void sort_and_dedup() {
    std::sort(items.begin(), items.end(),
              [](const Transition& a, const Transition& b) { return transition_cmp(a, b) < 0; });
    items.erase(std::unique(items.begin(), items.end(),
                            [](const Transition& a, const Transition& b) {
                              return transition_cmp(a, b) == 0;
                            }),
                items.end());
  }
};

namespace detail {

// `inner` with only its process part kept, for plugging into branch holes.
inline TermPtr plug(const TermPtr& t, const Context& inner) { return substitute(t, inner.process); }

inline Context wrap_outer(const Model& m, const Context& outer, const Context& filler) {
  auto w = substitute_context(outer, filler, m.atoms);
  if (!w) {
    // Resource composition out of capacity: keep the unwrapped filler as the
    // comparison world so the sum in question is evaluated somewhere rather
    // than dropped. Well-formed models built from their own universes do not
    // reach this.
    return filler;
  }
  return *w;
}

inline TransitionSet enumerate_rec(const Model& m, const Context& c, const Context& outer,
                                   const Context& inner, int unfold_budget);

// Transitions of (r, branch) under the enlarged outer context
//   outer((e, sum of the other branches, plugged) + [])
// as the SUM rule's premise demands.
inline TransitionSet sum_premise(const Model& m, const Resource& r, const TermPtr& sum_term,
                                 std::size_t j, const Context& outer, const Context& inner,
                                 int unfold_budget) {
  std::vector<TermPtr> residual;
  for (std::size_t i = 0; i < sum_term->kids().size(); ++i)
    if (i != j) residual.push_back(plug(sum_term->kids()[i], inner));
  residual.push_back(Term::hole());
  Context enlarged = wrap_outer(m, outer, Context{Resource{}, Term::sum(sum_term->label(), residual)});
  return enumerate_rec(m, Context{r, sum_term->kids()[j]}, enlarged, inner, unfold_budget);
}

inline TransitionSet enumerate_rec(const Model& m, const Context& c, const Context& outer,
                                   const Context& inner, int unfold_budget) {
  TransitionSet out;
  const Resource& r = c.resource;
  const TermPtr& e = c.process;
  switch (e->kind()) {
    case TermKind::Unit: {
      out.items.push_back({Action::unit(), c, c, outer, inner, {Rule::Tick}});
      break;
    }
    case TermKind::Hole: {
      // Only the distinguished empty context reduces, and only when the
      // inner context itself has a step here.
      if (!r.empty()) break;
      TransitionSet premise = enumerate_rec(m, inner, outer, unit_context(), unfold_budget);
      out.truncated |= premise.truncated;
      if (!premise.items.empty())
        out.items.push_back({Action::unit(), c, c, outer, inner, {Rule::Hole}});
      break;
    }
    case TermKind::Prefix: {
      auto next = mu_apply(m, e->action(), r);
      if (next)
        out.items.push_back(
            {e->action(), c, Context{*next, e->kids()[0]}, outer, inner, {Rule::Prefix}});
      break;
    }
    case TermKind::Const: {
      if (unfold_budget <= 0) {
        out.truncated = true;
        break;
      }
      TransitionSet inner_set =
          enumerate_rec(m, Context{r, m.resolve(e->label())}, outer, inner, unfold_budget - 1);
      out.truncated |= inner_set.truncated;
      for (auto& t : inner_set.items) {
        t.source = c;
        out.items.push_back(std::move(t));
      }
      break;
    }
    case TermKind::Sum: {
      const auto& branches = e->kids();
      if (branches.empty()) break;  // the zero process never evolves
      // Side-condition (S-Sigma): value each branch in the full wrapped
      // system; only maximizers may reduce.
      std::vector<Rat> values;
      SumCheck check;
      check.utility = e->label();
      for (const auto& b : branches) {
        Context world = wrap_outer(m, outer, Context{r, plug(b, inner)});
        Rat v = world.open() ? Rat(0) : utility_eval(m, e->label(), world);
        values.push_back(v);
        check.branch_values.emplace_back(b, v);
      }
      Rat best = *std::max_element(values.begin(), values.end());
      for (std::size_t j = 0; j < branches.size(); ++j) {
        if (values[j] != best) continue;
        TransitionSet prem = sum_premise(m, r, e, j, outer, inner, unfold_budget);
        out.truncated |= prem.truncated;
        for (const auto& p : prem.items) {
          SumCheck chosen = check;
          chosen.chosen = static_cast<int>(j);
          RuleTrace tr{Rule::Sum};
          tr.sum = std::move(chosen);
          tr.premises.push_back(p.trace);
          out.items.push_back({p.action, c, p.target, outer, inner, std::move(tr)});
        }
      }
      break;
    }
    case TermKind::Product: {
      const TermPtr& le = e->kids()[0];
      const TermPtr& re = e->kids()[1];
      for (const auto& [rl, rr] : two_splits(r)) {
        Context left_outer =
            wrap_outer(m, outer, Context{rr, Term::product(plug(re, inner), Term::hole())});
        Context right_outer =
            wrap_outer(m, outer, Context{rl, Term::product(plug(le, inner), Term::hole())});
        TransitionSet lt = enumerate_rec(m, Context{rl, le}, left_outer, inner, unfold_budget);
        out.truncated |= lt.truncated;
        if (lt.items.empty()) continue;
        TransitionSet rt = enumerate_rec(m, Context{rr, re}, right_outer, inner, unfold_budget);
        out.truncated |= rt.truncated;
        for (const auto& a : lt.items) {
          for (const auto& b : rt.items) {
            auto joint = compose(a.target.resource, b.target.resource, m.atoms);
            if (!joint) continue;  // this split contributes nothing
            RuleTrace tr{Rule::Prod};
            tr.split = {rl, rr};
            tr.premises = {a.trace, b.trace};
            out.items.push_back({a.action.times(b.action), c,
                                 Context{*joint, Term::product(a.target.process, b.target.process)},
                                 outer, inner, std::move(tr)});
          }
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace detail

// All transitions of `primary` derivable by the contextual reduction rules
// with the given outer and inner annotations. Constant unfolding is bounded
// by `depth`; hitting the bound flags the set as truncated.
inline TransitionSet enumerate_transitions(const Model& m, const Context& primary,
                                           const Context& outer, const Context& inner, int depth) {
  auto wf = well_formed(primary.process);
  if (!wf.ok) throw ModelError("ill-formed primary context: " + wf.why);
  TransitionSet out = detail::enumerate_rec(m, primary, outer, inner, depth);
  out.sort_and_dedup();
  return out;
}

// One joint possibility: the primary and its surrounding context step
// together, each annotated with the other as the satisfaction clauses demand.
struct JointStep {
  Transition primary;
  Transition surrounding;
};

inline std::vector<JointStep> joint_step(const Model& m, const Context& primary,
                                         const Context& surrounding, int depth) {
  TransitionSet ps = enumerate_transitions(m, primary, surrounding, empty_context(), depth);
  TransitionSet ss = enumerate_transitions(m, surrounding, empty_context(), primary, depth);
  std::vector<JointStep> out;
  for (const auto& p : ps.items)
    for (const auto& s : ss.items) out.push_back({p, s});
  return out;
}

struct TraceStep {
  JointStep step;
  int multiplicity = 1;  // matching pairs at this point; first one is taken
};

struct TraceResult {
  bool ok = true;
  int failure_index = -1;  // first action with no matching transition
  std::vector<TraceStep> steps;
  Context final_primary;
  Context final_surrounding;
};

// Follow the given primary actions via joint steps, choosing the first match
// under the deterministic enumeration order and reporting how many matched.
inline TraceResult derive_trace(const Model& m, Context primary, Context surrounding,
                                const std::vector<Action>& actions, int depth) {
  TraceResult out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    std::vector<JointStep> all = joint_step(m, primary, surrounding, depth);
    std::vector<JointStep> matching;
    for (const auto& js : all)
      if (js.primary.action == actions[i]) matching.push_back(js);
    if (matching.empty()) {
      out.ok = false;
      out.failure_index = static_cast<int>(i);
      break;
    }
    std::sort(matching.begin(), matching.end(), [](const JointStep& a, const JointStep& b) {
      if (int c = transition_cmp(a.surrounding, b.surrounding); c != 0) return c < 0;
      return transition_cmp(a.primary, b.primary) < 0;
    });
    out.steps.push_back({matching.front(), static_cast<int>(matching.size())});
    primary = matching.front().primary.target;
    surrounding = matching.front().surrounding.target;
  }
  out.final_primary = primary;
  out.final_surrounding = surrounding;
  return out;
}

}  // namespace utiliproc
