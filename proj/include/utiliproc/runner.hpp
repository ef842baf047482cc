#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "utiliproc/laws.hpp"
#include "utiliproc/logic.hpp"
#include "utiliproc/printer.hpp"
#include "utiliproc/semantics.hpp"
#include "utiliproc/trust.hpp"
#include "utiliproc/universe.hpp"

namespace utiliproc {

using Json = nlohmann::json;

// Invocation-wide settings, typically from CLI flags.
struct RunOptions {
  int depth = 8;
  std::string universe;  // override; empty keeps the query's choice
  std::string mode;      // override; "global" / "local"
  Rat tolerance{0};
  int bisim_depth = 4;
  bool include_timing = true;
};

struct RunResult {
  std::string query;
  std::string kind;
  bool ok = true;        // the query ran and its verdict is affirmative
  Json payload;          // structured verdict + witnesses
  double time_ms = 0.0;
  std::string universe_used;
  int depth_used = 0;
  std::string mode_used;
};

inline Json resource_json(const Resource& r) { return Json(r.atom_list()); }

inline Json action_json(const Action& a) { return Json(a.factors()); }

inline Json context_json(const Context& c) {
  return Json{{"resource", resource_json(c.resource)}, {"process", term_str(c.process)}};
}

inline Json rule_trace_json(const RuleTrace& t) {
  Json j;
  j["rule"] = rule_str(t.rule);
  if (t.sum) {
    j["utility"] = t.sum->utility;
    j["chosen_branch"] = t.sum->chosen;
    Json vals = Json::array();
    for (const auto& [b, v] : t.sum->branch_values)
      vals.push_back(Json{{"branch", term_str(b)}, {"value", rat_str(v)}});
    j["branch_values"] = vals;
  }
  if (t.split) {
    j["split_left"] = resource_json(t.split->first);
    j["split_right"] = resource_json(t.split->second);
  }
  if (!t.premises.empty()) {
    Json ps = Json::array();
    for (const auto& p : t.premises) ps.push_back(rule_trace_json(p));
    j["premises"] = ps;
  }
  return j;
}

inline std::string rule_trace_brief(const RuleTrace& t) {
  std::string out = rule_str(t.rule);
  if (!t.premises.empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.premises.size(); ++i) {
      if (i) out += ", ";
      out += rule_trace_brief(t.premises[i]);
    }
    out += ")";
  }
  return out;
}

inline Json transition_json(const Transition& t) {
  return Json{{"action", action_json(t.action)},
              {"source", context_json(t.source)},
              {"target", context_json(t.target)},
              {"rule", rule_trace_json(t.trace)},
              {"rule_tags", rule_trace_brief(t.trace)}};
}

// Shared evaluation state for one model.
class Runner {
 public:
  Runner(const Model& m, RunOptions opt) : model_(m), opt_(std::move(opt)) {}

  RunResult run(const Query& q) {
    auto started = std::chrono::steady_clock::now();
    RunResult r;
    r.query = q.name;
    r.kind = query_kind_str(q.kind);
    r.depth_used = q.depth.value_or(opt_.depth);
    std::string uni_name = opt_.universe.empty() ? q.universe : opt_.universe;
    std::string mode = opt_.mode.empty() ? q.mode.value_or("global") : opt_.mode;
    r.mode_used = mode;

    ContextUniverse uni = resolve_universe(model_, uni_name);
    r.universe_used = uni.name;
    EquivalenceChecker chk(model_, uni, r.depth_used);
    CheckConfig cfg;
    cfg.mode = mode == "local" ? SatMode::Local : SatMode::Global;
    cfg.depth = r.depth_used;
    cfg.bisim_depth = opt_.bisim_depth;
    cfg.tolerance = opt_.tolerance;

    switch (q.kind) {
      case QueryKind::Check: {
        const auto& b = std::get<CheckQuery>(q.body);
        Satisfaction sat(chk, cfg);
        SatResult sr = sat.check(b.primary, b.surrounding, b.formula);
        r.ok = sr.holds;
        r.payload["verdict"] = sr.holds;
        r.payload["formula"] = formula_str(b.formula);
        r.payload["primary"] = context_json(b.primary);
        r.payload["surrounding"] = context_json(b.surrounding);
        r.payload["witness"] = sr.witness;
        break;
      }
      case QueryKind::Bisim: {
        const auto& b = std::get<BisimQuery>(q.body);
        EquivalenceVerdict v = chk.bisim(b.left, b.right, opt_.bisim_depth);
        r.ok = v.related;
        r.payload["related"] = v.related;
        r.payload["depth"] = v.depth;
        r.payload["left"] = term_str(b.left);
        r.payload["right"] = term_str(b.right);
        r.payload["counterexample"] = v.counterexample;
        break;
      }
      case QueryKind::Trace: {
        const auto& b = std::get<TraceQuery>(q.body);
        TraceResult tr = derive_trace(model_, b.primary, b.surrounding, b.actions, r.depth_used);
        r.ok = tr.ok;
        r.payload["ok"] = tr.ok;
        if (!tr.ok) r.payload["failure_index"] = tr.failure_index;
        Json steps = Json::array();
        for (const auto& s : tr.steps) {
          steps.push_back(Json{{"primary", transition_json(s.step.primary)},
                               {"surrounding", transition_json(s.step.surrounding)},
                               {"matching_pairs", s.multiplicity}});
        }
        r.payload["steps"] = steps;
        r.payload["final_primary"] = context_json(tr.final_primary);
        r.payload["final_surrounding"] = context_json(tr.final_surrounding);
        break;
      }
      case QueryKind::TrustDomain: {
        const auto& b = std::get<TrustQuery>(q.body);
        const CostSpec* cost = model_.find_cost(b.cost);
        if (!cost) throw ModelError("undeclared cost: " + b.cost);
        TrustDomainResult td = trust_domain(chk, cfg, b.agent, b.formula, *cost, b.bound,
                                            b.candidates, b.max_trace_length);
        Json cands = Json::array();
        bool any = false;
        for (const auto& w : td.candidates) {
          Json cj;
          cj["candidate"] = context_json(w.candidate);
          cj["trusted"] = w.trusted;
          if (w.trusted) {
            any = true;
            Json trace = Json::array();
            for (const auto& a : w.trace) trace.push_back(action_json(a));
            cj["witness_trace"] = trace;
            cj["cost"] = rat_str(w.cost);
            cj["evolved_agent"] = context_json(w.evolved_agent);
            cj["evolved_candidate"] = context_json(w.evolved_candidate);
          }
          cands.push_back(cj);
        }
        r.ok = any;
        r.payload["bound"] = rat_str(b.bound);
        r.payload["candidates"] = cands;
        if (!b.levels.empty()) {
          std::vector<Rat> levels = b.levels;
          std::sort(levels.begin(), levels.end());
          auto frontier = iso_cost_frontier(chk, cfg, b.agent, *cost, b.candidates, levels,
                                            b.max_trace_length);
          Json fj = Json::array();
          for (const auto& [level, members] : frontier) {
            Json mj = Json::array();
            for (const auto& c : members) mj.push_back(context_json(c));
            fj.push_back(Json{{"level", rat_str(level)}, {"members", mj}});
          }
          r.payload["iso_cost_frontier"] = fj;
        }
        break;
      }
    }
    auto ended = std::chrono::steady_clock::now();
    r.time_ms = std::chrono::duration<double, std::milli>(ended - started).count();
    return r;
  }

  Json to_json(const RunResult& r) const {
    Json j;
    j["query"] = r.query;
    j["kind"] = r.kind;
    j["ok"] = r.ok;
    j["universe"] = r.universe_used;
    j["depth"] = r.depth_used;
    j["mode"] = r.mode_used;
    j["result"] = r.payload;
    if (opt_.include_timing) j["time_ms"] = r.time_ms;
    return j;
  }

  const Model& model() const { return model_; }
  const RunOptions& options() const { return opt_; }

 private:
  const Model& model_;
  RunOptions opt_;
};

// Renders one result for terminals; same content as the structured form.
inline std::string human_render(const RunResult& r, bool with_timing) {
  std::string out = r.query + " (" + r.kind + "): ";
  out += r.ok ? "ok" : "failed";
  out += " [universe=" + r.universe_used + " depth=" + std::to_string(r.depth_used) + " mode=" +
         r.mode_used + "]\n";
  if (r.kind == "check") {
    out += "  formula: " + r.payload["formula"].get<std::string>() + "\n";
    out += std::string("  verdict: ") + (r.payload["verdict"].get<bool>() ? "true" : "false") + "\n";
    for (const auto& w : r.payload["witness"]) out += "  " + w.get<std::string>() + "\n";
  } else if (r.kind == "bisim") {
    out += std::string("  related: ") + (r.payload["related"].get<bool>() ? "yes" : "no") + "\n";
    for (const auto& c : r.payload["counterexample"]) out += "  " + c.get<std::string>() + "\n";
  } else if (r.kind == "trace") {
    int i = 0;
    for (const auto& s : r.payload["steps"]) {
      const auto& p = s["primary"];
      out += "  step " + std::to_string(++i) + ": ";
      std::string act;
      for (const auto& f : p["action"]) act += (act.empty() ? "" : ".") + f.get<std::string>();
      if (act.empty()) act = "1";
      out += act + "  " + s["primary"]["rule_tags"].get<std::string>() + "\n";
      out += "    from " + p["source"]["process"].get<std::string>() + " with resource ";
      std::string rs;
      for (const auto& a : p["source"]["resource"]) rs += " " + a.get<std::string>();
      out += "{" + (rs.empty() ? "" : rs.substr(1)) + "}\n";
      out += "    to   " + p["target"]["process"].get<std::string>() + " with resource ";
      rs.clear();
      for (const auto& a : p["target"]["resource"]) rs += " " + a.get<std::string>();
      out += "{" + (rs.empty() ? "" : rs.substr(1)) + "}\n";
      // surface the sum side-condition values along the derivation
      std::function<void(const Json&)> sums = [&](const Json& rt) {
        if (rt.contains("branch_values")) {
          out += "    sum[" + rt["utility"].get<std::string>() + "] chose branch " +
                 std::to_string(rt["chosen_branch"].get<int>()) + ":";
          for (const auto& bv : rt["branch_values"])
            out += " " + bv["branch"].get<std::string>() + " = " + bv["value"].get<std::string>() +
                   ";";
          out += "\n";
        }
        if (rt.contains("premises"))
          for (const auto& p2 : rt["premises"]) sums(p2);
      };
      sums(s["primary"]["rule"]);
    }
    if (!r.payload["ok"].get<bool>())
      out += "  failed at action index " + std::to_string(r.payload["failure_index"].get<int>()) +
             "\n";
  } else if (r.kind == "trustdomain") {
    for (const auto& c : r.payload["candidates"]) {
      out += "  candidate " + c["candidate"]["process"].get<std::string>() + ": ";
      if (c["trusted"].get<bool>()) {
        out += "trusted, cost " + c["cost"].get<std::string>() + ", trace";
        for (const auto& a : c["witness_trace"]) {
          std::string act;
          for (const auto& f : a) act += (act.empty() ? "" : ".") + f.get<std::string>();
          out += " " + (act.empty() ? "1" : act);
        }
        out += "\n";
      } else {
        out += "not trusted\n";
      }
    }
  }
  if (with_timing) out += "  time: " + std::to_string(r.time_ms) + " ms\n";
  return out;
}

}  // namespace utiliproc
