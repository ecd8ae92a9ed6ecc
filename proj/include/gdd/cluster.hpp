#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace gdd {

// A set of variable indices, kept sorted ascending without repeats.
// Ordering is lexicographic over the sorted index sequence, so {0,1} < {0,1,2} < {0,2}.
class Cluster {
public:
  Cluster() = default;
  Cluster(std::initializer_list<int> variables);
  explicit Cluster(std::vector<int> variables);

  std::span<const int> variables() const { return vars_; }
  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }
  int operator[](std::size_t i) const { return vars_[i]; }
  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }

  bool contains(int variable) const;
  bool is_subset_of(const Cluster& other) const;
  bool is_proper_subset_of(const Cluster& other) const;

  // Display form "{1,2,3}"; indices are shifted by one unless zero_based is set.
  std::string to_string(bool zero_based = false) const;

  friend auto operator<=>(const Cluster&, const Cluster&) = default;
  friend bool operator==(const Cluster&, const Cluster&) = default;

private:
  std::vector<int> vars_;
};

Cluster intersection(const Cluster& a, const Cluster& b);
Cluster cluster_union(const Cluster& a, const Cluster& b);

// Orders larger clusters first, ties lexicographically.
struct LargerFirst {
  bool operator()(const Cluster& a, const Cluster& b) const
  {
    if (a.size() != b.size())
      return a.size() > b.size();
    return a < b;
  }
};

//
// Dense tables over a cluster are row-major over the sorted scope: the last
// variable of the scope varies fastest.
//

std::size_t table_size(const Cluster& scope, std::span<const int> cardinalities);

// Index of the configuration that `states` (indexed by variable) induces on `scope`.
std::size_t config_index(const Cluster& scope, std::span<const int> cardinalities,
                         std::span<const int> states);

// States of scope's variables (in scope order) for a configuration index.
std::vector<int> config_states(const Cluster& scope, std::span<const int> cardinalities,
                               std::size_t index);

// For every configuration of `from`, the index of its restriction to `to`.
// Requires to ⊆ from.
std::vector<std::uint32_t> projection_map(const Cluster& from, const Cluster& to,
                                          std::span<const int> cardinalities);

}
