#pragma once

#include <string>

#include "utiliproc/model.hpp"

namespace utiliproc {

// Renders a model back to .upm text. parse(print(parse(x))) == parse(x) is
// the round-trip contract; printed terms normalize sum chains to the
// explicit sum[...] form, which parses back to the identical tree.
inline std::string print_model(const Model& m) {
  std::string out;
  auto res = [](const Resource& r) { return r.str(); };
  auto ctx = [](const Context& c) { return c.str(); };

  if (!m.atoms.entries().empty()) {
    out += "atoms {";
    for (const auto& [name, cap] : m.atoms.entries()) {
      out += " " + name;
      if (cap != 1) out += ":" + std::to_string(cap);
    }
    out += " }\n\n";
  }

  if (!m.actions.empty()) {
    out += "actions {\n";
    for (const auto& a : m.actions)
      out += "  " + a.name + " requires " + res(a.required) + " produces " + res(a.produced) + "\n";
    out += "}\n\n";
  }

  if (!m.mu_facts.empty()) {
    out += "mu {\n";
    for (const auto& f : m.mu_facts)
      out += "  (" + f.action.str() + " ; " + res(f.at) + ") = " + res(f.result) + "\n";
    out += "}\n\n";
  }

  for (const auto& p : m.processes) out += "process " + p.name + " = " + term_str(p.body) + "\n";
  if (!m.processes.empty()) out += "\n";

  for (const auto& u : m.utilities) {
    out += "utility " + u.name + " {\n";
    for (const auto& [k, v] : u.table) out += "  " + ctx(k) + " = " + rat_str(v) + "\n";
    out += "  default = " + rat_str(u.fallback) + "\n}\n\n";
  }

  for (const auto& c : m.costs) {
    out += "cost " + c.name + " {\n";
    for (const auto& [a, v] : c.per_action) out += "  " + a + " = " + rat_str(v) + "\n";
    out += "}\n\n";
  }

  for (const auto& p : m.valuation) {
    out += "atomprop " + p.name + " {\n";
    for (const auto& c : p.members) out += "  " + ctx(c) + "\n";
    out += "}\n\n";
  }

  for (const auto& u : m.universes) {
    if (u.auto_gen) {
      out += "universe " + u.name + " auto(" + std::to_string(u.cap) + ")\n\n";
      continue;
    }
    out += "universe " + u.name + " {\n";
    for (const auto& c : u.contexts) out += "  " + ctx(c) + "\n";
    out += "}\n\n";
  }

  for (const auto& q : m.queries) {
    out += "query " + q.name + " : " + query_kind_str(q.kind) + " {\n";
    if (!q.universe.empty()) out += "  universe = " + q.universe + "\n";
    if (q.depth) out += "  depth = " + std::to_string(*q.depth) + "\n";
    if (q.mode) out += "  mode = " + *q.mode + "\n";
    switch (q.kind) {
      case QueryKind::Check: {
        const auto& b = std::get<CheckQuery>(q.body);
        out += "  primary = " + ctx(b.primary) + "\n";
        out += "  surrounding = " + ctx(b.surrounding) + "\n";
        out += "  formula = " + formula_str(b.formula) + "\n";
        break;
      }
      case QueryKind::Bisim: {
        const auto& b = std::get<BisimQuery>(q.body);
        out += "  left = " + term_str(b.left) + "\n";
        out += "  right = " + term_str(b.right) + "\n";
        break;
      }
      case QueryKind::Trace: {
        const auto& b = std::get<TraceQuery>(q.body);
        out += "  primary = " + ctx(b.primary) + "\n";
        out += "  surrounding = " + ctx(b.surrounding) + "\n";
        out += "  actions = [";
        for (std::size_t i = 0; i < b.actions.size(); ++i)
          out += (i ? ", " : " ") + b.actions[i].str();
        out += b.actions.empty() ? "]\n" : " ]\n";
        break;
      }
      case QueryKind::TrustDomain: {
        const auto& b = std::get<TrustQuery>(q.body);
        out += "  agent = " + ctx(b.agent) + "\n";
        out += "  formula = " + formula_str(b.formula) + "\n";
        out += "  cost = " + b.cost + "\n";
        out += "  bound = " + rat_str(b.bound) + "\n";
        if (!b.levels.empty()) {
          out += "  levels = [";
          for (std::size_t i = 0; i < b.levels.size(); ++i)
            out += (i ? ", " : " ") + rat_str(b.levels[i]);
          out += " ]\n";
        }
        out += "  maxlen = " + std::to_string(b.max_trace_length) + "\n";
        out += "  candidates = [";
        for (std::size_t i = 0; i < b.candidates.size(); ++i)
          out += (i ? ", " : " ") + ctx(b.candidates[i]);
        out += b.candidates.empty() ? "]\n" : " ]\n";
        break;
      }
    }
    out += "}\n\n";
  }
  return out;
}

}  // namespace utiliproc
