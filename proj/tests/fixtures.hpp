#pragma once

#include <algorithm>
#include <vector>

#include "gdd/cluster.hpp"
#include "gdd/factor_graph.hpp"
#include "gdd/random.hpp"

namespace fixtures {

using gdd::Cluster;
using gdd::FactorGraph;
using gdd::PotentialTable;

// N(0, scale²) entries for each cluster, in cluster order.
inline FactorGraph random_model(std::vector<int> cards, const std::vector<Cluster>& clusters,
                                std::uint64_t seed, double scale = 1.0)
{
  gdd::Xorshift64Star rng(seed);
  std::vector<PotentialTable> potentials;
  for (const auto& c : clusters) {
    std::vector<double> values(gdd::table_size(c, cards));
    for (auto& v : values)
      v = scale * rng.normal();
    potentials.push_back({c, std::move(values)});
  }
  return FactorGraph(std::move(cards), std::move(potentials));
}

// Five variables, clusters {1,2,3}, {2,3,4}, {3,4,5}, {3} (0-based here).
inline std::vector<Cluster> fig2_clusters()
{
  return {Cluster{0, 1, 2}, Cluster{1, 2, 3}, Cluster{2, 3, 4}, Cluster{2}};
}

inline FactorGraph fig2_graph(std::uint64_t seed = 0, int states = 2)
{
  return random_model(std::vector<int>(5, states), fig2_clusters(), seed);
}

// The four 4-cliques of a 3×3 grid numbered row by row from 1.
inline std::vector<Cluster> fig5_clusters()
{
  return {Cluster{0, 1, 3, 4}, Cluster{1, 2, 4, 5}, Cluster{3, 4, 6, 7}, Cluster{4, 5, 7, 8}};
}

inline FactorGraph fig5_graph(std::uint64_t seed = 0, int states = 2)
{
  return random_model(std::vector<int>(9, states), fig5_clusters(), seed);
}

// 1-based convenience for writing figure clusters.
inline Cluster one_based(std::initializer_list<int> vars)
{
  std::vector<int> v;
  for (int i : vars)
    v.push_back(i - 1);
  return Cluster(std::move(v));
}

// Binary 4-cycle 0-1-2-3-0. Three edges reward disagreement, the last one
// agreement, so no labelling satisfies all four. Edge weights are drawn from
// [0.5, 1.5] and every entry carries noise in [−0.05, 0.05].
inline FactorGraph frustrated_cycle(std::uint64_t seed)
{
  gdd::Xorshift64Star rng(seed);
  const std::vector<Cluster> edges{Cluster{0, 1}, Cluster{1, 2}, Cluster{2, 3}, Cluster{0, 3}};
  std::vector<PotentialTable> potentials;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double w = 0.5 + rng.uniform();
    std::vector<double> values(4);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const bool rewarded = e + 1 < edges.size() ? a != b : a == b;
        values[a * 2 + b] = (rewarded ? w : 0.0) + 0.1 * (rng.uniform() - 0.5);
      }
    }
    potentials.push_back({edges[e], std::move(values)});
  }
  return FactorGraph(std::vector<int>(4, 2), std::move(potentials));
}

// Random small model: chain, cycle and a few random triples over n binary
// variables (n ≤ 12), with node potentials on some variables.
inline FactorGraph random_small(std::uint64_t seed, int n = 8)
{
  gdd::Xorshift64Star rng(seed ^ 0x5eedull);
  std::vector<Cluster> clusters;
  for (int i = 0; i < n; ++i)
    if (rng.below(2))
      clusters.push_back(Cluster{i});
  for (int i = 0; i + 1 < n; ++i)
    clusters.push_back(Cluster{i, i + 1});
  const int triples = 1 + static_cast<int>(rng.below(3));
  for (int t = 0; t < triples; ++t) {
    std::vector<int> v;
    while (v.size() < 3) {
      const int x = static_cast<int>(rng.below(n));
      if (std::find(v.begin(), v.end(), x) == v.end())
        v.push_back(x);
    }
    clusters.emplace_back(std::move(v));
  }
  // drop duplicate scopes before drawing tables
  std::vector<Cluster> unique;
  for (auto& c : clusters)
    if (std::find(unique.begin(), unique.end(), c) == unique.end())
      unique.push_back(c);
  return random_model(std::vector<int>(n, 2), unique, seed);
}

}
