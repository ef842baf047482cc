#pragma once

#include <set>
#include <string>
#include <vector>

#include "utiliproc/model.hpp"
#include "utiliproc/modification.hpp"
#include "utiliproc/semantics.hpp"

namespace utiliproc {

// The finite quantification domain standing in for the paper-level "for all
// resources / contexts": a context list plus the derived resource, outer,
// inner and term pools every bounded check ranges over.
struct ContextUniverse {
  std::string name;
  std::vector<Context> contexts;      // all members, canonical order
  std::vector<Context> closed;        // closed members
  std::vector<Resource> resources;    // distinct resources of members
  std::vector<TermPtr> terms;         // distinct closed process parts
  std::vector<Context> outers;        // open wrappers quantified as annotations
  std::vector<Context> inners;        // inner annotations
};

namespace detail {

inline constexpr int kMaxOuters = 6;
inline constexpr int kMaxInners = 4;

inline void derive_pools(ContextUniverse& u) {
  std::sort(u.contexts.begin(), u.contexts.end(), ContextLess{});
  u.contexts.erase(std::unique(u.contexts.begin(), u.contexts.end(), context_eq), u.contexts.end());

  std::set<Resource> rs(u.resources.begin(), u.resources.end());
  std::set<TermPtr, TermLess> ts(u.terms.begin(), u.terms.end());
  std::vector<Context> opens;
  rs.insert(Resource{});
  for (const auto& c : u.contexts) {
    rs.insert(c.resource);
    if (c.closed()) {
      u.closed.push_back(c);
      ts.insert(c.process);
    } else {
      opens.push_back(c);
    }
  }
  u.resources.assign(rs.begin(), rs.end());
  u.terms.assign(ts.begin(), ts.end());

  // Outer annotations: the empty context, the trivially closed unit world,
  // declared open members, then product wrappers built from closed members.
  u.outers.push_back(empty_context());
  u.outers.push_back(unit_context());
  for (const auto& o : opens)
    if (static_cast<int>(u.outers.size()) < 2 + kMaxOuters) u.outers.push_back(o);
  for (const auto& c : u.closed) {
    if (static_cast<int>(u.outers.size()) >= 2 + kMaxOuters) break;
    if (c.process->kind() == TermKind::Unit) continue;
    Context wrapper{c.resource, Term::product(c.process, Term::hole())};
    bool dup = false;
    for (const auto& o : u.outers) dup |= context_eq(o, wrapper);
    if (!dup) u.outers.push_back(wrapper);
  }

  u.inners.push_back(empty_context());
  u.inners.push_back(unit_context());
  for (const auto& c : u.closed) {
    if (static_cast<int>(u.inners.size()) >= 2 + kMaxInners) break;
    if (c.process->kind() == TermKind::Unit) continue;
    bool dup = false;
    for (const auto& i : u.inners) dup |= context_eq(i, c);
    if (!dup) u.inners.push_back(c);
  }
}

// Resources reachable from the mentioned ones by applying declared atomic
// actions, to a fixed closure depth.
inline std::set<Resource> reachable_resources(const Model& m, std::set<Resource> seed, int rounds) {
  for (int i = 0; i < rounds; ++i) {
    std::set<Resource> next = seed;
    for (const auto& r : seed)
      for (const auto& spec : m.actions)
        if (auto r2 = mu_apply(m, Action(spec.name), r)) next.insert(*r2);
    if (next.size() == seed.size()) break;
    seed.swap(next);
  }
  return seed;
}

}  // namespace detail

// Auto-generated universe: all subterms of the model's process definitions
// paired with the resources reachable from those the model mentions, capped.
inline ContextUniverse auto_universe(const Model& m, int cap) {
  ContextUniverse u;
  u.name = "auto";

  std::set<TermPtr, TermLess> terms;
  terms.insert(Term::unit());
  terms.insert(Term::zero());
  for (const auto& p : m.processes) {
    terms.insert(Term::constant(p.name));
    collect_subterms(p.body, terms);
  }

  std::set<Resource> seeds;
  seeds.insert(Resource{});
  for (const auto& a : m.actions) {
    seeds.insert(a.required);
    seeds.insert(a.produced);
  }
  for (const auto& us : m.utilities)
    for (const auto& [k, v] : us.table) seeds.insert(k.resource);
  for (const auto& ud : m.universes)
    for (const auto& c : ud.contexts) seeds.insert(c.resource);
  for (const auto& ap : m.valuation)
    for (const auto& c : ap.members) seeds.insert(c.resource);
  // Compositions of the per-action requirements give the joint worlds.
  std::set<Resource> joint = seeds;
  for (const auto& r : seeds)
    for (const auto& s : seeds)
      if (auto c = compose(r, s, m.atoms)) joint.insert(*c);
  joint = detail::reachable_resources(m, joint, 2);

  std::vector<TermPtr> term_list;
  for (const auto& t : terms)
    if (well_formed(t).ok) term_list.push_back(t);
  std::vector<Resource> res_list(joint.begin(), joint.end());

  // Spread the cap across terms, rotating through the resource pool so both
  // components stay diverse rather than exhausting the cap on the first few.
  int per_term = std::max<int>(1, term_list.empty() ? cap : cap / static_cast<int>(term_list.size()));
  for (std::size_t i = 0; i < term_list.size(); ++i) {
    for (int k = 0; k < per_term && !res_list.empty(); ++k) {
      if (static_cast<int>(u.contexts.size()) >= cap) break;
      const Resource& r = res_list[(i * per_term + k) % res_list.size()];
      u.contexts.push_back(Context{r, term_list[i]});
    }
  }
  // Keep the full reachable resource pool available to quantifiers even when
  // the context cap trimmed the cross product.
  constexpr int kMaxResources = 12;
  for (const auto& r : res_list) {
    if (static_cast<int>(u.resources.size()) >= kMaxResources) break;
    u.resources.push_back(r);
  }
  detail::derive_pools(u);
  return u;
}

inline ContextUniverse build_universe(const Model& m, const UniverseDecl& decl) {
  if (decl.auto_gen) {
    ContextUniverse u = auto_universe(m, decl.cap);
    u.name = decl.name;
    return u;
  }
  ContextUniverse u;
  u.name = decl.name;
  u.contexts = decl.contexts;
  detail::derive_pools(u);
  return u;
}

// Resolve a universe by name; the empty name gives the first declared
// universe, falling back to an auto-generated one.
inline ContextUniverse resolve_universe(const Model& m, const std::string& name, int default_cap = 60) {
  if (name.empty()) {
    if (!m.universes.empty()) return build_universe(m, m.universes.front());
    UniverseDecl d;
    d.name = "auto";
    d.auto_gen = true;
    d.cap = default_cap;
    return build_universe(m, d);
  }
  if (name == "auto") {
    UniverseDecl d;
    d.name = "auto";
    d.auto_gen = true;
    d.cap = default_cap;
    return build_universe(m, d);
  }
  const UniverseDecl* decl = m.find_universe(name);
  if (!decl) throw ModelError("undeclared universe: " + name);
  return build_universe(m, *decl);
}

}  // namespace utiliproc
