#pragma once

#include <optional>
#include <string>
#include <vector>

#include "utiliproc/model.hpp"

namespace utiliproc {

// rho(a): the minimal resource at which the modification function is defined.
// For a composite action this is the composition of the per-factor minima;
// if that composition leaves the capacity bounds there is no minimal
// resource and the result is undefined.
inline std::optional<Resource> rho(const Model& m, const Action& a) {
  Resource need;
  for (const auto& f : a.factors()) {
    const ActionSpec* spec = m.find_action(f);
    if (!spec) throw ModelError("undeclared action: " + f);
    need = need.plus(spec->required);
  }
  if (!m.atoms.valid(need)) return std::nullopt;
  return need;
}

namespace detail {

// Atomic case: defined iff the requirement is contained in r and the
// produced part composes with the remainder.
inline std::optional<Resource> mu_atomic(const Model& m, const std::string& factor,
                                         const Resource& r) {
  const ActionSpec* spec = m.find_action(factor);
  if (!spec) throw ModelError("undeclared action: " + factor);
  if (!r.includes(spec->required)) return std::nullopt;
  return compose(spec->produced, r.minus(spec->required), m.atoms);
}

}  // namespace detail

// mu(a, r). The unit action leaves r unchanged. A composite action is
// evaluated by searching all splits of r across its factors; every
// successful split must agree on the result, which the homomorphism law
// guarantees for tables induced from per-action specs.
inline std::optional<Resource> mu_apply(const Model& m, const Action& a, const Resource& r) {
  const auto& factors = a.factors();
  if (factors.empty()) return r;
  if (factors.size() == 1) return detail::mu_atomic(m, factors[0], r);
  std::optional<Resource> agreed;
  for (const auto& split : k_splits(r, static_cast<int>(factors.size()))) {
    Resource acc;
    bool ok = true;
    for (std::size_t i = 0; i < factors.size() && ok; ++i) {
      auto part = detail::mu_atomic(m, factors[i], split[i]);
      if (!part) {
        ok = false;
        break;
      }
      auto comb = compose(acc, *part, m.atoms);
      if (!comb) {
        ok = false;
        break;
      }
      acc = *comb;
    }
    if (!ok) continue;
    if (agreed && *agreed != acc)
      throw ModelError("modification of composite action " + a.str() +
                       " disagrees across resource splits at " + r.str());
    agreed = acc;
  }
  return agreed;
}

}  // namespace utiliproc
