#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gdd/cluster.hpp"

namespace gdd {

// Log-domain table over a cluster, row-major over the sorted scope.
struct PotentialTable {
  Cluster scope;
  std::vector<double> values;

  friend bool operator==(const PotentialTable&, const PotentialTable&) = default;
};

// One state per variable.
struct Assignment {
  std::vector<int> states;

  std::size_t size() const { return states.size(); }
  int operator[](std::size_t i) const { return states[i]; }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Unchecked model input. Factor scopes may be given in any order; tables are
// row-major over the scope as given and are permuted to sorted order on
// construction of a FactorGraph.
struct ModelDescription {
  struct Factor {
    std::vector<int> variables;
    std::vector<double> values;
  };
  std::vector<int> cardinalities;
  std::vector<Factor> factors;
};

enum class ViolationKind {
  bad_cardinality,
  empty_cluster,
  index_out_of_range,
  repeated_variable,
  table_size,
  non_finite,
};

struct Violation {
  std::size_t cluster_index;   // factor index; SIZE_MAX for model-level issues
  ViolationKind kind;
  std::string message;
};

std::vector<Violation> validate(const ModelDescription& model);

class FactorGraph {
public:
  FactorGraph() = default;

  // Throws InvalidModel listing every violation. Factors with the same
  // variable set are merged by summing their tables, keeping the position of
  // the first occurrence.
  explicit FactorGraph(const ModelDescription& model);
  FactorGraph(std::vector<int> cardinalities, std::vector<PotentialTable> potentials);

  std::size_t num_vars() const { return cardinalities_.size(); }
  std::span<const int> cardinalities() const { return cardinalities_; }
  std::size_t num_clusters() const { return potentials_.size(); }
  std::span<const PotentialTable> potentials() const { return potentials_; }
  const PotentialTable& potential(std::size_t i) const { return potentials_[i]; }

  std::vector<Cluster> clusters() const;
  // nullptr when `scope` is not a cluster of the graph
  const PotentialTable* find(const Cluster& scope) const;
  // Total number of joint configurations, saturating at UINT64_MAX.
  std::uint64_t state_space_size() const;

  friend bool operator==(const FactorGraph&, const FactorGraph&) = default;

private:
  std::vector<int> cardinalities_;
  std::vector<PotentialTable> potentials_;
};

std::vector<Violation> validate(const FactorGraph& graph);

// Σ_c θ_c(x_c). Throws InvalidAssignment for a wrong length or out-of-range state.
double energy(const FactorGraph& graph, const Assignment& x);

// States of x at the variables of s, in sorted scope order.
std::vector<int> restrict_to(const Assignment& x, const Cluster& s);

// Grid with one node potential per pixel, one edge potential per horizontal
// and vertical neighbour pair and one potential per unit square, all entries
// i.i.d. N(0,1) from Xorshift64Star(seed).
//
// Variable (x, y) has index y*width + x. Clusters are emitted as all nodes,
// then for each pixel in row-major order its right and down edges, then all
// squares in row-major order of their top-left pixel. Table entries are drawn
// in cluster order, each table in row-major order.
FactorGraph random_grid(int width, int height, int states, std::uint64_t seed);

std::string to_string(ViolationKind kind);

}
