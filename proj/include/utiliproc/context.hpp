#pragma once

#include <optional>
#include <string>

#include "utiliproc/resource.hpp"
#include "utiliproc/term.hpp"

namespace utiliproc {

// The semantic notion of world: a resource paired with a process term. Open
// when the process has the hole, closed otherwise.
struct Context {
  Resource resource;
  TermPtr process;

  bool open() const { return hole_count(process) > 0; }
  bool closed() const { return !open(); }

  std::string str() const { return "(" + resource.str() + " ; " + term_str(process) + ")"; }
};

inline Context empty_context() { return Context{Resource{}, Term::hole()}; }
inline Context unit_context() { return Context{Resource{}, Term::unit()}; }

inline int context_cmp(const Context& a, const Context& b) {
  if (a.resource != b.resource) return a.resource < b.resource ? -1 : 1;
  return term_cmp(a.process, b.process);
}

inline bool context_eq(const Context& a, const Context& b) { return context_cmp(a, b) == 0; }

struct ContextLess {
  bool operator()(const Context& a, const Context& b) const { return context_cmp(a, b) < 0; }
};

inline Context canonicalize(const Context& c) { return Context{c.resource, canonicalize(c.process)}; }

// Context substitution: for open c1 the resources compose and the process is
// plugged; composition outside capacities makes the result undefined. A
// closed c1 absorbs the argument.
inline std::optional<Context> substitute_context(const Context& c1, const Context& c2,
                                                 const AtomTable& atoms) {
  if (c1.closed()) return c1;
  auto r = compose(c1.resource, c2.resource, atoms);
  if (!r) return std::nullopt;
  return Context{*r, substitute(c1.process, c2.process)};
}

}  // namespace utiliproc
