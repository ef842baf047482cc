#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace utiliproc {

// A finite multiset of atom names. Entries are kept sorted by name with
// strictly positive counts, so structural equality is multiset equality.
class Resource {
 public:
  Resource() = default;

  void add(const std::string& atom, int n = 1) {
    if (n <= 0) return;
    auto it = std::lower_bound(items_.begin(), items_.end(), atom,
                               [](const auto& e, const std::string& a) { return e.first < a; });
    if (it != items_.end() && it->first == atom) it->second += n;
    else items_.insert(it, {atom, n});
  }

  int count(const std::string& atom) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), atom,
                               [](const auto& e, const std::string& a) { return e.first < a; });
    return (it != items_.end() && it->first == atom) ? it->second : 0;
  }

  bool empty() const { return items_.empty(); }

  int total() const {
    int t = 0;
    for (const auto& [a, n] : items_) t += n;
    return t;
  }

  const std::vector<std::pair<std::string, int>>& items() const { return items_; }

  // Multiset containment: other <= this pointwise.
  bool includes(const Resource& other) const {
    for (const auto& [a, n] : other.items_)
      if (count(a) < n) return false;
    return true;
  }

  // Plain multiset sum, with no capacity check.
  Resource plus(const Resource& other) const {
    Resource out = *this;
    for (const auto& [a, n] : other.items_) out.add(a, n);
    return out;
  }

  // Multiset difference; requires includes(other).
  Resource minus(const Resource& other) const {
    Resource out;
    for (const auto& [a, n] : items_) {
      int rest = n - other.count(a);
      if (rest > 0) out.add(a, rest);
    }
    return out;
  }

  // Atom names repeated by multiplicity, sorted. This is the wire form.
  std::vector<std::string> atom_list() const {
    std::vector<std::string> out;
    for (const auto& [a, n] : items_)
      for (int i = 0; i < n; ++i) out.push_back(a);
    return out;
  }

  std::string str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& a : atom_list()) {
      if (!first) out += " ";
      out += a;
      first = false;
    }
    out += "}";
    return out;
  }

  auto operator<=>(const Resource&) const = default;

 private:
  std::vector<std::pair<std::string, int>> items_;
};

// Declared atoms with per-atom capacities (default 1). Composition of
// resources is defined iff the sum stays within every capacity.
class AtomTable {
 public:
  void declare(const std::string& atom, int capacity = 1) { caps_[atom] = capacity; }

  bool declared(const std::string& atom) const { return caps_.count(atom) != 0; }

  int capacity(const std::string& atom) const {
    auto it = caps_.find(atom);
    return it == caps_.end() ? 0 : it->second;
  }

  bool valid(const Resource& r) const {
    for (const auto& [a, n] : r.items())
      if (n > capacity(a)) return false;
    return true;
  }

  const std::map<std::string, int>& entries() const { return caps_; }

 private:
  std::map<std::string, int> caps_;
};

// Partial monoid composition: multiset sum when within capacities.
inline std::optional<Resource> compose(const Resource& r, const Resource& s, const AtomTable& atoms) {
  Resource sum = r.plus(s);
  if (!atoms.valid(sum)) return std::nullopt;
  return sum;
}

// All ordered pairs (r1, r2) with r1 + r2 == r. Deterministic order.
inline std::vector<std::pair<Resource, Resource>> two_splits(const Resource& r) {
  std::vector<std::pair<Resource, Resource>> out;
  const auto& items = r.items();
  std::vector<int> take(items.size(), 0);
  for (;;) {
    Resource left, right;
    for (std::size_t i = 0; i < items.size(); ++i) {
      left.add(items[i].first, take[i]);
      right.add(items[i].first, items[i].second - take[i]);
    }
    out.emplace_back(std::move(left), std::move(right));
    std::size_t i = 0;
    while (i < items.size() && take[i] == items[i].second) take[i++] = 0;
    if (i == items.size()) break;
    ++take[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

// All ordered k-tuples of resources summing to r.
inline std::vector<std::vector<Resource>> k_splits(const Resource& r, int k) {
  std::vector<std::vector<Resource>> out;
  if (k <= 0) {
    if (r.empty()) out.push_back({});
    return out;
  }
  if (k == 1) {
    out.push_back({r});
    return out;
  }
  for (const auto& [head, rest] : two_splits(r)) {
    for (auto& tail : k_splits(rest, k - 1)) {
      std::vector<Resource> tuple;
      tuple.push_back(head);
      for (auto& t : tail) tuple.push_back(std::move(t));
      out.push_back(std::move(tuple));
    }
  }
  return out;
}

}  // namespace utiliproc
