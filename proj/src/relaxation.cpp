#include "gdd/relaxation.hpp"

#include <algorithm>
#include <set>

#include "gdd/errors.hpp"

namespace gdd {

void RelaxationSpec::add(const Cluster& c, std::span<const Cluster> sub_clusters)
{
  if (c.empty())
    throw InvalidSpec("extended cluster is empty");
  for (const auto& s : sub_clusters) {
    if (s.empty())
      throw InvalidSpec("empty sub-cluster of " + c.to_string());
    if (!s.is_subset_of(c))
      throw InvalidSpec(s.to_string() + " is not a subset of " + c.to_string());
  }

  auto [it, inserted] = index_.emplace(c, extended_.size());
  if (inserted) {
    extended_.push_back(c);
    subs_.emplace_back();
  }
  auto& subs = subs_[it->second];
  for (const auto& s : sub_clusters) {
    if (std::find(subs.begin(), subs.end(), s) == subs.end())
      subs.push_back(s);
  }
}

std::span<const Cluster> RelaxationSpec::sub_clusters(const Cluster& c) const
{
  auto it = index_.find(c);
  if (it == index_.end())
    return {};
  return subs_[it->second];
}

std::optional<std::size_t> RelaxationSpec::index_of(const Cluster& c) const
{
  auto it = index_.find(c);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

std::vector<Cluster> RelaxationSpec::support() const
{
  std::vector<Cluster> out = extended_;
  std::set<Cluster> seen(extended_.begin(), extended_.end());
  for (const auto& subs : subs_) {
    for (const auto& s : subs) {
      if (seen.insert(s).second)
        out.push_back(s);
    }
  }
  return out;
}

bool RelaxationSpec::covers(std::span<const Cluster> clusters) const
{
  const auto t = support();
  const std::set<Cluster> support_set(t.begin(), t.end());
  return std::all_of(clusters.begin(), clusters.end(),
                     [&](const Cluster& c) { return support_set.contains(c); });
}

std::size_t RelaxationSpec::num_edges() const
{
  std::size_t n = 0;
  for (const auto& subs : subs_)
    n += subs.size();
  return n;
}

namespace {

// Per-variable index of a cluster family, used to enumerate overlapping pairs.
std::vector<std::vector<std::size_t>> by_variable(std::span<const Cluster> clusters)
{
  int max_var = -1;
  for (const auto& c : clusters)
    if (!c.empty())
      max_var = std::max(max_var, c.variables().back());
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(max_var + 1));
  for (std::size_t i = 0; i < clusters.size(); ++i)
    for (int v : clusters[i])
      out[v].push_back(i);
  return out;
}

// Nonempty c ∩ c' over all pairs, c ∩ c = c included.
std::set<Cluster> pairwise_intersections(std::span<const Cluster> clusters)
{
  std::set<Cluster> out(clusters.begin(), clusters.end());
  const auto index = by_variable(clusters);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    std::set<std::size_t> partners;
    for (int v : clusters[i])
      for (std::size_t j : index[v])
        if (j > i)
          partners.insert(j);
    for (std::size_t j : partners)
      out.insert(intersection(clusters[i], clusters[j]));
  }
  return out;
}

// Members of `pool` that are subsets of c (strict when `strict` is set).
std::vector<Cluster> subsets_within(const Cluster& c, std::span<const Cluster> pool,
                                    const std::vector<std::vector<std::size_t>>& index,
                                    bool strict)
{
  std::set<std::size_t> touched;
  for (int v : c)
    if (static_cast<std::size_t>(v) < index.size())
      touched.insert(index[v].begin(), index[v].end());
  std::vector<Cluster> out;
  for (std::size_t j : touched) {
    const auto& s = pool[j];
    if (strict ? s.is_proper_subset_of(c) : s.is_subset_of(c))
      out.push_back(s);
  }
  std::sort(out.begin(), out.end(), LargerFirst{});
  return out;
}

std::vector<Cluster> all_nonempty_subsets(const Cluster& c)
{
  std::vector<Cluster> out;
  const std::size_t n = c.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> vars;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i))
        vars.push_back(c[i]);
    out.emplace_back(std::move(vars));
  }
  return out;
}

std::vector<Cluster> subset_closure(const FactorGraph& graph, std::size_t max_order)
{
  std::set<Cluster> closure;
  for (const auto& p : graph.potentials()) {
    if (p.scope.size() > max_order)
      throw CapacityError("cluster " + p.scope.to_string() + " has order " +
                          std::to_string(p.scope.size()) + ", above the cap of " +
                          std::to_string(max_order));
    for (auto& s : all_nonempty_subsets(p.scope))
      closure.insert(std::move(s));
  }
  std::vector<Cluster> out(closure.begin(), closure.end());
  std::sort(out.begin(), out.end(), LargerFirst{});
  return out;
}

std::vector<Cluster> singletons_of(const Cluster& c)
{
  std::vector<Cluster> out;
  for (int v : c)
    out.push_back(Cluster{v});
  return out;
}

}

std::vector<Cluster> intersection_closure(std::span<const Cluster> clusters)
{
  std::vector<Cluster> out;
  std::set<Cluster> seen;
  for (const auto& c : clusters)
    if (seen.insert(c).second)
      out.push_back(c);

  // worklist: every new member is intersected with all earlier members
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      auto s = intersection(out[i], out[j]);
      if (!s.empty() && seen.insert(s).second)
        out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Cluster> maximal_clusters(std::span<const Cluster> clusters)
{
  std::vector<Cluster> out;
  for (const auto& c : clusters) {
    const bool dominated = std::any_of(clusters.begin(), clusters.end(), [&](const Cluster& d) {
      return c.is_proper_subset_of(d);
    });
    if (!dominated && std::find(out.begin(), out.end(), c) == out.end())
      out.push_back(c);
  }
  return out;
}

RelaxationSpec gmplp_spec(const FactorGraph& graph)
{
  const auto clusters = graph.clusters();
  const auto inter = pairwise_intersections(clusters);
  const std::vector<Cluster> pool(inter.begin(), inter.end());
  const auto index = by_variable(pool);

  RelaxationSpec spec;
  for (const auto& c : clusters)
    spec.add(c, subsets_within(c, pool, index, false));
  return spec;
}

RelaxationSpec dd_spec(const FactorGraph& graph)
{
  RelaxationSpec spec;
  for (std::size_t i = 0; i < graph.num_vars(); ++i)
    spec.add(Cluster{static_cast<int>(i)}, {});
  for (const auto& p : graph.potentials())
    if (p.scope.size() > 1)
      spec.add(p.scope, singletons_of(p.scope));
  return spec;
}

RelaxationSpec cycle_spec(const FactorGraph& graph)
{
  RelaxationSpec spec;
  for (std::size_t i = 0; i < graph.num_vars(); ++i)
    spec.add(Cluster{static_cast<int>(i)}, {});
  for (const auto& p : graph.potentials()) {
    const auto& c = p.scope;
    if (c.size() == 3) {
      spec.add(c, {Cluster{c[0], c[1]}, Cluster{c[0], c[2]}, Cluster{c[1], c[2]}});
    } else if (c.size() > 1) {
      spec.add(c, singletons_of(c));
    }
  }
  return spec;
}

RelaxationSpec powerset_spec(const FactorGraph& graph, std::size_t max_order)
{
  RelaxationSpec spec;
  for (const auto& c : subset_closure(graph, max_order)) {
    std::vector<Cluster> subs;
    if (c.size() > 1) {
      for (std::size_t drop = 0; drop < c.size(); ++drop) {
        std::vector<int> vars;
        for (std::size_t i = 0; i < c.size(); ++i)
          if (i != drop)
            vars.push_back(c[i]);
        subs.emplace_back(std::move(vars));
      }
      std::sort(subs.begin(), subs.end());
    }
    spec.add(c, subs);
  }
  return spec;
}

RelaxationSpec all_subsets_spec(const FactorGraph& graph, std::size_t max_order)
{
  RelaxationSpec spec;
  for (const auto& c : subset_closure(graph, max_order)) {
    auto subs = all_nonempty_subsets(c);
    std::erase(subs, c);
    std::sort(subs.begin(), subs.end(), LargerFirst{});
    spec.add(c, subs);
  }
  return spec;
}

RelaxationSpec pi_system_spec(const FactorGraph& graph)
{
  const auto clusters = graph.clusters();
  const auto closure = intersection_closure(clusters);
  const auto index = by_variable(closure);

  RelaxationSpec spec;
  for (const auto& c : closure) {
    const auto below = subsets_within(c, closure, index, true);
    std::vector<Cluster> maximal;
    for (const auto& s : below) {
      const bool blocked = std::any_of(below.begin(), below.end(), [&](const Cluster& t) {
        return s.is_proper_subset_of(t);
      });
      if (!blocked)
        maximal.push_back(s);
    }
    spec.add(c, maximal);
  }
  return spec;
}

RelaxationSpec max_intersection_spec(const FactorGraph& graph)
{
  const auto clusters = graph.clusters();
  const auto maximal = maximal_clusters(clusters);
  std::set<Cluster> targets(clusters.begin(), clusters.end());
  {
    const auto inter = pairwise_intersections(maximal);
    targets.insert(inter.begin(), inter.end());
  }
  const std::vector<Cluster> pool(targets.begin(), targets.end());
  const auto index = by_variable(pool);

  RelaxationSpec spec;
  for (const auto& c : maximal)
    spec.add(c, subsets_within(c, pool, index, true));
  return spec;
}

RelaxationSpec relaxation_by_name(const std::string& name, const FactorGraph& graph,
                                  std::size_t max_order)
{
  if (name == "gmplp")
    return gmplp_spec(graph);
  if (name == "dd")
    return dd_spec(graph);
  if (name == "cycle")
    return cycle_spec(graph);
  if (name == "ps")
    return powerset_spec(graph, max_order);
  if (name == "pi-s")
    return pi_system_spec(graph);
  if (name == "mi")
    return max_intersection_spec(graph);
  throw InvalidSpec("unknown relaxation '" + name + "'");
}

std::span<const std::string> relaxation_names()
{
  static const std::vector<std::string> names{"gmplp", "dd", "cycle", "ps", "pi-s", "mi"};
  return names;
}

}
