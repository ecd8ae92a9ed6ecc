#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "gdd/cluster.hpp"
#include "gdd/factor_graph.hpp"
#include "gdd/polytope_diagram.hpp"

namespace gdd {

struct MapSolution {
  Assignment argmax;
  double value = 0.0;
};

// Exhaustive MAP. Configurations are visited in lexicographic order and only
// a strict improvement replaces the incumbent, so the lexicographically
// smallest maximiser wins. Throws CapacityError above `cap` configurations.
MapSolution brute_force_map(const FactorGraph& graph, std::uint64_t cap = 10'000'000);

// Homogeneous marginalisation equations over the scalars μ_t(x_t).
struct AffineConstraintSystem {
  // (t, configuration index of x_t) for each column
  using Key = std::pair<Cluster, std::size_t>;
  struct Term {
    std::size_t column;
    int coefficient;   // ±1
  };
  using Row = std::vector<Term>;

  std::vector<Key> variables;
  std::vector<Row> rows;
  std::set<Cluster> anchors;
};

inline constexpr std::size_t oracle_variable_cap = 20'000;

// One row Σ_{x_{c∖s}} μ_c(x_c) − μ_s(x_s) = 0 per edge (c → s) and x_s, over
// the variables μ_t for every t ∈ V^M. A self-edge gives empty rows. Throws
// CapacityError above oracle_variable_cap variables.
AffineConstraintSystem constraint_system(const PolytopeDiagram& diagram,
                                         std::span<const int> cardinalities);

enum class Projection {
  // Eliminate μ_v for v outside the anchors existentially and compare what
  // remains on the anchor marginals. Use this when node sets differ.
  anchors,
  // Compare over the union of both variable sets; a variable missing from one
  // system is free there.
  all_variables,
};

// Identical solution sets, decided by exact rational rank tests:
// rank(A) = rank(B) = rank([A; B]).
bool affine_system_equal(const AffineConstraintSystem& a, const AffineConstraintSystem& b,
                         Projection projection = Projection::anchors);

// Solutions of a are all solutions of b: rank(A) = rank([A; B]).
bool affine_system_implies(const AffineConstraintSystem& a, const AffineConstraintSystem& b,
                           Projection projection = Projection::anchors);

// Rank of the system's rows (before any projection).
std::size_t affine_rank(const AffineConstraintSystem& system);

// Def. 2 checked directly: with every other edge into e1.to removed, keeping
// e1 or keeping e2 yields the same solution set.
bool edges_equivalent_by_definition(const PolytopeDiagram& diagram, const Edge& e1,
                                    const Edge& e2, std::span<const int> cardinalities);

// Removing v (with rewiring) leaves the anchor projection unchanged.
bool removal_preserves_polytope(const PolytopeDiagram& before, const PolytopeDiagram& after,
                                std::span<const int> cardinalities);

}
