#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gdd/cluster.hpp"
#include "gdd/factor_graph.hpp"

namespace gdd {

// A local marginal polytope given by the extended cluster set C′ and, for
// each c ∈ C′, its sub-clusters S(c) (each s ⊆ c). The support set
// T = C′ ∪ (∪_c S(c)) is derived on demand.
class RelaxationSpec {
public:
  // Adds c to C′ (or extends S(c) when c is already present). Throws
  // InvalidSpec when some s is not a subset of c or is empty.
  void add(const Cluster& c, std::span<const Cluster> sub_clusters);
  void add(const Cluster& c, std::initializer_list<Cluster> sub_clusters)
  {
    add(c, std::span<const Cluster>(sub_clusters.begin(), sub_clusters.size()));
  }

  std::span<const Cluster> extended_clusters() const { return extended_; }
  std::span<const Cluster> sub_clusters(std::size_t i) const { return subs_[i]; }
  std::span<const Cluster> sub_clusters(const Cluster& c) const;
  std::size_t size() const { return extended_.size(); }
  std::optional<std::size_t> index_of(const Cluster& c) const;
  bool is_extended(const Cluster& c) const { return index_.contains(c); }

  // C′ in order, followed by sub-clusters in order of first appearance.
  std::vector<Cluster> support() const;

  // C ⊆ T, the coverage requirement every relaxation must meet.
  bool covers(std::span<const Cluster> clusters) const;
  bool covers(const FactorGraph& graph) const { return covers(graph.clusters()); }

  std::size_t num_edges() const;

  friend bool operator==(const RelaxationSpec&, const RelaxationSpec&) = default;

private:
  std::vector<Cluster> extended_;
  std::vector<std::vector<Cluster>> subs_;
  std::map<Cluster, std::size_t> index_;
};

// GMPLP: C′ = C, S(c) = {s ∈ I : s ⊆ c} with I the nonempty pairwise
// intersections of C (c ∩ c = c included, so c ∈ S(c)).
RelaxationSpec gmplp_spec(const FactorGraph& graph);

// Dual decomposition: singletons of every variable plus the clusters of order
// > 1; each of the latter sends to its singletons.
RelaxationSpec dd_spec(const FactorGraph& graph);

// Dual decomposition where order-3 clusters send to their pairs instead.
RelaxationSpec cycle_spec(const FactorGraph& graph);

// All nonempty subsets of clusters, each sending to its subsets of one less
// element. Throws CapacityError when a cluster exceeds max_order.
RelaxationSpec powerset_spec(const FactorGraph& graph, std::size_t max_order = 6);

// Intersection closure C_π of C; every c ∈ C_π sends to its maximal proper
// subsets within C_π.
RelaxationSpec pi_system_spec(const FactorGraph& graph);

// Maximal clusters C_m; each sends to every strict subset that lies in
// C ∪ I_m, I_m being the pairwise intersections of C_m.
RelaxationSpec max_intersection_spec(const FactorGraph& graph);

// The unreduced subset lattice: all nonempty subsets of clusters, each
// sending to all of its strict subsets.
RelaxationSpec all_subsets_spec(const FactorGraph& graph, std::size_t max_order = 6);

// Builder by CLI name: gmplp, dd, cycle, ps, pi-s, mi. Throws InvalidSpec for
// an unknown name.
RelaxationSpec relaxation_by_name(const std::string& name, const FactorGraph& graph,
                                  std::size_t max_order = 6);
std::span<const std::string> relaxation_names();

// Intersection closure of a family (empty sets dropped), C first in order.
std::vector<Cluster> intersection_closure(std::span<const Cluster> clusters);

// Clusters not strictly contained in another, in input order.
std::vector<Cluster> maximal_clusters(std::span<const Cluster> clusters);

}
