#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <vector>

namespace utiliproc {

// An element of the free commutative action monoid: a multiset of atomic
// action names. The unit action 1 is the empty multiset; multiplication is
// multiset union.
class Action {
 public:
  Action() = default;

  explicit Action(std::string atomic) { factors_.push_back(std::move(atomic)); }

  explicit Action(std::vector<std::string> factors) : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end());
  }

  static Action unit() { return Action(); }

  bool is_unit() const { return factors_.empty(); }

  const std::vector<std::string>& factors() const { return factors_; }

  Action times(const Action& other) const {
    std::vector<std::string> all;
    all.reserve(factors_.size() + other.factors_.size());
    std::merge(factors_.begin(), factors_.end(), other.factors_.begin(), other.factors_.end(),
               std::back_inserter(all));
    Action out;
    out.factors_ = std::move(all);
    return out;
  }

  std::string str() const {
    if (factors_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += ".";
      out += factors_[i];
    }
    return out;
  }

  auto operator<=>(const Action&) const = default;

 private:
  std::vector<std::string> factors_;  // sorted
};

}  // namespace utiliproc
