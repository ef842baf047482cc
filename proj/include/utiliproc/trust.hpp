#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "utiliproc/logic.hpp"
#include "utiliproc/semantics.hpp"

namespace utiliproc {

// Total cost of a finite trace: composite actions cost the sum of their
// factors, the unit action costs 0, unlisted declared actions cost 0.
inline Rat trace_cost(const Model& m, const CostSpec& k, const std::vector<Action>& trace) {
  Rat total(0);
  for (const auto& a : trace) {
    for (const auto& f : a.factors()) {
      if (!m.find_action(f)) throw ModelError("undeclared action in trace: " + f);
      auto it = k.per_action.find(f);
      if (it != k.per_action.end()) total += it->second;
    }
  }
  return total;
}

struct TrustWitness {
  Context candidate;
  bool trusted = false;
  std::vector<Action> trace;  // first qualifying trace, shortest then lexicographic
  Rat cost{0};
  Context evolved_agent;
  Context evolved_candidate;
};

struct TrustDomainResult {
  std::vector<TrustWitness> candidates;  // in query order
  std::vector<Context> domain() const {
    std::vector<Context> out;
    for (const auto& w : candidates)
      if (w.trusted) out.push_back(w.candidate);
    return out;
  }
};

namespace detail {

struct SearchNode {
  Context agent;
  Context candidate;
  std::vector<Action> trace;
};

}  // namespace detail

// TD(E, phi, K_E, K) restricted to the given candidate contexts: a candidate
// is trusted when the agent has a trace within the cost bound, co-evolving
// the candidate, that reaches a state satisfying the property under the
// co-evolved surrounding. The empty trace is admitted.
inline TrustDomainResult trust_domain(EquivalenceChecker& chk, const CheckConfig& cfg,
                                      const Context& agent, const FormulaPtr& property,
                                      const CostSpec& cost, const Rat& bound,
                                      const std::vector<Context>& candidates, int max_len) {
  const Model& m = chk.model();
  if (agent.open()) throw ModelError("trust-domain agent must be a closed context");
  Satisfaction sat(chk, cfg);
  TrustDomainResult result;

  for (const auto& cand : candidates) {
    auto wf = well_formed(cand.process);
    if (!wf.ok || hole_count(cand.process) != 1)
      throw ModelError("trust-domain candidate must have exactly one hole: " + cand.str());
    TrustWitness w;
    w.candidate = cand;

    // Breadth-first over joint evolutions: shortest qualifying trace first,
    // lexicographically least among equals.
    std::vector<detail::SearchNode> frontier = {{agent, cand, {}}};
    std::vector<std::string> seen;
    for (int len = 0; len <= max_len && !w.trusted; ++len) {
      std::sort(frontier.begin(), frontier.end(),
                [](const detail::SearchNode& a, const detail::SearchNode& b) {
                  return std::lexicographical_compare(a.trace.begin(), a.trace.end(),
                                                      b.trace.begin(), b.trace.end());
                });
      for (const auto& node : frontier) {
        Rat c = trace_cost(m, cost, node.trace);
        // The judgement S,F |= phi presupposes the composed system exists:
        // a state only qualifies when the candidate accepts the agent.
        if (!substitute_context(node.candidate, node.agent, m.atoms)) continue;
        if (rat_leq(c, bound, cfg.tolerance) &&
            sat.check(node.agent, node.candidate, property).holds) {
          w.trusted = true;
          w.trace = node.trace;
          w.cost = c;
          w.evolved_agent = node.agent;
          w.evolved_candidate = node.candidate;
          break;
        }
      }
      if (w.trusted || len == max_len) break;
      std::vector<detail::SearchNode> next;
      for (const auto& node : frontier) {
        for (const auto& js : joint_step(m, node.agent, node.candidate, cfg.depth)) {
          detail::SearchNode n{js.primary.target, js.surrounding.target, node.trace};
          n.trace.push_back(js.primary.action);
          std::string key = n.agent.str() + "|" + n.candidate.str() + "|";
          for (const auto& a : n.trace) key += a.str() + ",";
          if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
          seen.push_back(key);
          next.push_back(std::move(n));
        }
      }
      frontier = std::move(next);
    }

    // Self-check: a reported witness must replay and stay within the bound.
    if (w.trusted && !w.trace.empty()) {
      TraceResult replay = derive_trace(m, agent, cand, w.trace, cfg.depth);
      if (!replay.ok || !rat_leq(trace_cost(m, cost, w.trace), bound, cfg.tolerance))
        throw ModelError("trust-domain witness failed replay for candidate " + cand.str());
    }
    result.candidates.push_back(std::move(w));
  }
  return result;
}

// trust_domain at each cost level with the trivial property; levels must be
// ascending, so the results are nested.
inline std::map<Rat, std::vector<Context>> iso_cost_frontier(
    EquivalenceChecker& chk, const CheckConfig& cfg, const Context& agent, const CostSpec& cost,
    const std::vector<Context>& candidates, const std::vector<Rat>& levels, int max_len) {
  std::map<Rat, std::vector<Context>> out;
  for (const auto& level : levels) {
    TrustDomainResult r =
        trust_domain(chk, cfg, agent, Formula::top(), cost, level, candidates, max_len);
    out[level] = r.domain();
  }
  return out;
}

}  // namespace utiliproc
