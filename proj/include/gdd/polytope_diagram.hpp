#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gdd/cluster.hpp"
#include "gdd/factor_graph.hpp"
#include "gdd/relaxation.hpp"

namespace gdd {

// Directed marginalisation constraint (from → to), to ⊆ from.
struct Edge {
  Cluster from;
  Cluster to;

  bool is_self() const { return from == to; }
  std::string to_string() const { return from.to_string() + " -> " + to.to_string(); }

  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Marginal polytope diagram: nodes V^M ⊇ C, edges (c → s) with s ⊆ c.
// Self-edges are representable. Immutable; transforms return new diagrams.
class PolytopeDiagram {
public:
  PolytopeDiagram() = default;
  // Throws InvalidDiagram when an anchor is not a node, an edge endpoint is
  // not a node, or an edge target is not a subset of its source.
  PolytopeDiagram(std::set<Cluster> nodes, std::set<Edge> edges, std::set<Cluster> anchors);

  const std::set<Cluster>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  const std::set<Cluster>& anchors() const { return anchors_; }

  bool has_edge(const Cluster& from, const Cluster& to) const
  {
    return edges_.contains(Edge{from, to});
  }
  // Non-self edges into / out of a node.
  std::vector<Edge> incoming(const Cluster& node) const;
  std::vector<Edge> outgoing(const Cluster& node) const;

  friend bool operator==(const PolytopeDiagram&, const PolytopeDiagram&) = default;

private:
  std::set<Cluster> nodes_;
  std::set<Edge> edges_;
  std::set<Cluster> anchors_;
};

// V^M = T, one edge per (c, s ∈ S(c)). Throws InvalidDiagram when the
// relaxation does not cover the anchors.
PolytopeDiagram diagram_from_relaxation(const RelaxationSpec& spec,
                                        std::span<const Cluster> anchors);
inline PolytopeDiagram diagram_from_relaxation(const RelaxationSpec& spec, const FactorGraph& graph)
{
  return diagram_from_relaxation(spec, graph.clusters());
}

// C′ = nodes with an outgoing edge (in node order), S(c) = their targets.
RelaxationSpec relaxation_from_diagram(const PolytopeDiagram& diagram);

// Partition of the edges into each target, closed under the two readable
// equivalence rules:
//   (1) t ⊂ s ⊂ c and (c → s) ∈ E  ⇒  (c → t) ≡ (s → t)
//   (2) (c → s₁), (c → s₂) ∈ E, t ⊂ s₁, t ⊂ s₂  ⇒  (s₁ → t) ≡ (s₂ → t)
// The closure runs over every candidate edge (v → t), v ∈ V^M, t ⊂ v, so
// equivalences through absent edges are kept. Self-edges are never classified.
class EdgeEquivalenceClasses {
public:
  // Classes of edges into t; each class sorted, classes ordered by first edge.
  const std::vector<std::vector<Edge>>& classes(const Cluster& target) const;
  bool equivalent(const Edge& a, const Edge& b) const;
  std::vector<Cluster> targets() const;

private:
  friend EdgeEquivalenceClasses equivalent_edge_classes(const PolytopeDiagram&,
                                                        std::span<const Cluster>, bool);
  std::map<Cluster, std::vector<std::vector<Edge>>> classes_;
};

// Classes over the existing edges into each target, or over all candidate
// edges when include_candidates is set. Throws InvalidDiagram for a target
// that is not a node.
EdgeEquivalenceClasses equivalent_edge_classes(const PolytopeDiagram& diagram,
                                               std::span<const Cluster> targets,
                                               bool include_candidates = false);

// Non-anchor nodes whose incoming (non-self) edges number exactly one or all
// fall in one class. Sufficient, not necessary, for redundancy. Nodes with no
// incoming edge are never reported.
std::set<Cluster> redundant_nodes(const PolytopeDiagram& diagram);
bool is_redundant(const PolytopeDiagram& diagram, const Cluster& node);

// Deletes v, rewiring every path c → v → s into c → s. Throws
// RefusedTransform unless v is a reported redundant node.
PolytopeDiagram remove_node(const PolytopeDiagram& diagram, const Cluster& node);

// Keeps one edge per equivalence class of every target, the one with the
// lexicographically first source.
// Targets are processed from the smallest up, so each removal is justified by
// edges into strict supersets that are still in place. Self-edges are kept.
PolytopeDiagram reduce_edges(const PolytopeDiagram& diagram);

// One "{vars} -> {vars}" line per edge (1-based), in edge order.
std::string dump(const PolytopeDiagram& diagram);

}
