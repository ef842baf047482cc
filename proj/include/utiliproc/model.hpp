#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "utiliproc/context.hpp"
#include "utiliproc/formula.hpp"
#include "utiliproc/number.hpp"

namespace utiliproc {

// Raised for malformed uses of a loaded model (undeclared names, open
// contexts where closed ones are required, and the like). Validation of a
// model catches these up front; downstream code treats them as bugs.
struct ModelError : std::runtime_error {
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Effect of one atomic action: defined exactly on resources containing
// `required`, consuming it and adding `produced`.
struct ActionSpec {
  std::string name;
  Resource required;
  Resource produced;
};

// An explicit modification-table fact transcribed into the model. Facts do
// not drive evaluation; the validator checks each one against the extension
// induced by the per-action specs.
struct MuFact {
  Action action;
  Resource at;
  Resource result;
  int line = 0, col = 0;
};

// A utility function as a finite table over canonical closed contexts.
struct UtilitySpec {
  std::string name;
  std::vector<std::pair<Context, Rat>> table;  // keys canonical, sorted
  Rat fallback{0};

  void sort_table() {
    std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
      return context_cmp(a.first, b.first) < 0;
    });
  }
};

// Per-action trace costs; a composite action costs the sum of its factors
// and the unit action costs 0. Unlisted declared actions cost 0.
struct CostSpec {
  std::string name;
  std::map<std::string, Rat> per_action;
};

struct ProcessDef {
  std::string name;
  TermPtr body;
};

struct AtomProp {
  std::string name;
  std::vector<Context> members;  // canonical, sorted
};

struct UniverseDecl {
  std::string name;
  bool auto_gen = false;
  int cap = 60;
  std::vector<Context> contexts;  // explicit declarations
};

enum class QueryKind { Check, Bisim, Trace, TrustDomain };

inline std::string query_kind_str(QueryKind k) {
  switch (k) {
    case QueryKind::Check: return "check";
    case QueryKind::Bisim: return "bisim";
    case QueryKind::Trace: return "trace";
    case QueryKind::TrustDomain: return "trustdomain";
  }
  return "?";
}

struct CheckQuery {
  Context primary{Resource{}, Term::unit()};
  Context surrounding = empty_context();
  FormulaPtr formula;
};

struct BisimQuery {
  TermPtr left;
  TermPtr right;
};

struct TraceQuery {
  Context primary{Resource{}, Term::unit()};
  Context surrounding = empty_context();
  std::vector<Action> actions;
};

struct TrustQuery {
  Context agent{Resource{}, Term::unit()};
  FormulaPtr formula;
  std::string cost;
  Rat bound{0};
  std::vector<Rat> levels;  // optional iso-cost levels; empty unless given
  std::vector<Context> candidates;
  int max_trace_length = 3;
};

struct Query {
  std::string name;
  QueryKind kind;
  std::string universe;  // empty = default
  std::optional<int> depth;
  std::optional<std::string> mode;  // "global" / "local"
  std::variant<CheckQuery, BisimQuery, TraceQuery, TrustQuery> body;
};

// The full user-authored artifact, immutable once loaded.
struct Model {
  AtomTable atoms;
  std::vector<ActionSpec> actions;
  std::vector<MuFact> mu_facts;
  std::vector<UtilitySpec> utilities;
  std::vector<CostSpec> costs;
  std::vector<ProcessDef> processes;
  std::vector<AtomProp> valuation;
  std::vector<UniverseDecl> universes;
  std::vector<Query> queries;

  const ActionSpec* find_action(const std::string& name) const {
    for (const auto& a : actions)
      if (a.name == name) return &a;
    return nullptr;
  }
  const UtilitySpec* find_utility(const std::string& name) const {
    for (const auto& u : utilities)
      if (u.name == name) return &u;
    return nullptr;
  }
  const CostSpec* find_cost(const std::string& name) const {
    for (const auto& c : costs)
      if (c.name == name) return &c;
    return nullptr;
  }
  const ProcessDef* find_process(const std::string& name) const {
    for (const auto& p : processes)
      if (p.name == name) return &p;
    return nullptr;
  }
  const AtomProp* find_atomprop(const std::string& name) const {
    for (const auto& v : valuation)
      if (v.name == name) return &v;
    return nullptr;
  }
  const UniverseDecl* find_universe(const std::string& name) const {
    for (const auto& u : universes)
      if (u.name == name) return &u;
    return nullptr;
  }
  const Query* find_query(const std::string& name) const {
    for (const auto& q : queries)
      if (q.name == name) return &q;
    return nullptr;
  }

  TermPtr resolve(const std::string& const_name) const {
    const ProcessDef* d = find_process(const_name);
    if (!d) throw ModelError("undeclared process constant: " + const_name);
    return d->body;
  }
};

// Table value at the canonical form of c, falling back to the default. The
// neutral utility is identically zero.
inline Rat utility_eval(const Model& m, const UtilitySpec& u, const Context& c) {
  if (c.open()) throw ModelError("utility of an open context is undefined");
  if (u.name == kNeutralUtility) return Rat(0);
  Context key = canonicalize(c);
  for (const auto& [k, v] : u.table)
    if (context_eq(k, key)) return v;
  return u.fallback;
}

inline Rat utility_eval(const Model& m, const std::string& utility, const Context& c) {
  if (utility == kNeutralUtility) {
    if (c.open()) throw ModelError("utility of an open context is undefined");
    return Rat(0);
  }
  const UtilitySpec* u = m.find_utility(utility);
  if (!u) throw ModelError("undeclared utility: " + utility);
  return utility_eval(m, *u, c);
}

}  // namespace utiliproc
