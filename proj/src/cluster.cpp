#include "gdd/cluster.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "gdd/errors.hpp"

namespace gdd {

Cluster::Cluster(std::initializer_list<int> variables)
: Cluster(std::vector<int>(variables))
{ }

Cluster::Cluster(std::vector<int> variables)
: vars_(std::move(variables))
{
  std::sort(vars_.begin(), vars_.end());
  if (std::adjacent_find(vars_.begin(), vars_.end()) != vars_.end())
    throw InvalidModel("cluster has a repeated variable index");
  if (!vars_.empty() && vars_.front() < 0)
    throw InvalidModel("cluster has a negative variable index");
}

bool Cluster::contains(int variable) const
{
  return std::binary_search(vars_.begin(), vars_.end(), variable);
}

bool Cluster::is_subset_of(const Cluster& other) const
{
  return std::includes(other.vars_.begin(), other.vars_.end(), vars_.begin(), vars_.end());
}

bool Cluster::is_proper_subset_of(const Cluster& other) const
{
  return size() < other.size() && is_subset_of(other);
}

std::string Cluster::to_string(bool zero_based) const
{
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (i)
      out << ',';
    out << vars_[i] + (zero_based ? 0 : 1);
  }
  out << '}';
  return out.str();
}

Cluster intersection(const Cluster& a, const Cluster& b)
{
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Cluster(std::move(out));
}

Cluster cluster_union(const Cluster& a, const Cluster& b)
{
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Cluster(std::move(out));
}

std::size_t table_size(const Cluster& scope, std::span<const int> cardinalities)
{
  std::size_t n = 1;
  for (int v : scope) {
    if (static_cast<std::size_t>(v) >= cardinalities.size())
      throw InvalidModel("variable " + std::to_string(v) + " has no cardinality");
    const auto k = static_cast<std::size_t>(cardinalities[v]);
    if (k != 0 && n > std::numeric_limits<std::uint32_t>::max() / k)
      throw CapacityError("table over " + scope.to_string() + " is too large");
    n *= k;
  }
  return n;
}

std::size_t config_index(const Cluster& scope, std::span<const int> cardinalities,
                         std::span<const int> states)
{
  std::size_t index = 0;
  for (int v : scope)
    index = index * cardinalities[v] + states[v];
  return index;
}

std::vector<int> config_states(const Cluster& scope, std::span<const int> cardinalities,
                               std::size_t index)
{
  std::vector<int> out(scope.size());
  for (std::size_t i = scope.size(); i-- > 0;) {
    const auto k = static_cast<std::size_t>(cardinalities[scope[i]]);
    out[i] = static_cast<int>(index % k);
    index /= k;
  }
  return out;
}

std::vector<std::uint32_t> projection_map(const Cluster& from, const Cluster& to,
                                          std::span<const int> cardinalities)
{
  if (!to.is_subset_of(from))
    throw InvalidSpec(to.to_string() + " is not a subset of " + from.to_string());

  const std::size_t n = from.size();
  // Stride of each variable of `from` inside the `to` table (0 when absent).
  std::vector<std::uint32_t> stride(n, 0);
  {
    std::uint32_t s = 1;
    std::size_t j = to.size();
    for (std::size_t i = n; i-- > 0;) {
      if (j > 0 && to[j - 1] == from[i]) {
        stride[i] = s;
        s *= static_cast<std::uint32_t>(cardinalities[from[i]]);
        --j;
      }
    }
  }

  const std::size_t size = table_size(from, cardinalities);
  std::vector<std::uint32_t> out(size);
  std::vector<int> digit(n, 0);
  std::uint32_t target = 0;
  for (std::size_t idx = 0; idx < size; ++idx) {
    out[idx] = target;
    // odometer increment, last variable fastest
    for (std::size_t i = n; i-- > 0;) {
      if (++digit[i] < cardinalities[from[i]]) {
        target += stride[i];
        break;
      }
      target -= stride[i] * static_cast<std::uint32_t>(digit[i] - 1);
      digit[i] = 0;
    }
  }
  return out;
}

}
