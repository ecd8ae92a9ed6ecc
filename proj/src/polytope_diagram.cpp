#include "gdd/polytope_diagram.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "gdd/errors.hpp"

namespace gdd {

PolytopeDiagram::PolytopeDiagram(std::set<Cluster> nodes, std::set<Edge> edges,
                                 std::set<Cluster> anchors)
: nodes_(std::move(nodes))
, edges_(std::move(edges))
, anchors_(std::move(anchors))
{
  for (const auto& a : anchors_)
    if (!nodes_.contains(a))
      throw InvalidDiagram("anchor cluster " + a.to_string() + " is not a diagram node");
  for (const auto& e : edges_) {
    if (!nodes_.contains(e.from) || !nodes_.contains(e.to))
      throw InvalidDiagram("edge " + e.to_string() + " has an endpoint outside the node set");
    if (!e.to.is_subset_of(e.from))
      throw InvalidDiagram("edge " + e.to_string() + " targets a non-subset");
  }
}

std::vector<Edge> PolytopeDiagram::incoming(const Cluster& node) const
{
  std::vector<Edge> out;
  for (const auto& e : edges_)
    if (e.to == node && !e.is_self())
      out.push_back(e);
  return out;
}

std::vector<Edge> PolytopeDiagram::outgoing(const Cluster& node) const
{
  std::vector<Edge> out;
  auto it = edges_.lower_bound(Edge{node, Cluster{}});
  for (; it != edges_.end() && it->from == node; ++it)
    if (!it->is_self())
      out.push_back(*it);
  return out;
}

PolytopeDiagram diagram_from_relaxation(const RelaxationSpec& spec,
                                        std::span<const Cluster> anchors)
{
  const auto support = spec.support();
  std::set<Cluster> nodes(support.begin(), support.end());
  for (const auto& a : anchors)
    if (!nodes.contains(a))
      throw InvalidDiagram("relaxation does not cover cluster " + a.to_string());

  std::set<Edge> edges;
  const auto extended = spec.extended_clusters();
  for (std::size_t i = 0; i < extended.size(); ++i)
    for (const auto& s : spec.sub_clusters(i))
      edges.insert(Edge{extended[i], s});
  return PolytopeDiagram(std::move(nodes), std::move(edges),
                         std::set<Cluster>(anchors.begin(), anchors.end()));
}

RelaxationSpec relaxation_from_diagram(const PolytopeDiagram& diagram)
{
  RelaxationSpec spec;
  std::vector<Cluster> subs;
  const Cluster* current = nullptr;
  for (const auto& e : diagram.edges()) {
    if (current && *current != e.from) {
      spec.add(*current, subs);
      subs.clear();
    }
    current = &e.from;
    subs.push_back(e.to);
  }
  if (current)
    spec.add(*current, subs);
  return spec;
}

namespace {

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n)
  : parent_(n)
  {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x)
  {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b)
  {
    a = find(a);
    b = find(b);
    if (a != b)
      parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<std::size_t> parent_;
};

// Classes over candidate sources of edges into `target`, as lists of sources.
std::vector<std::vector<Cluster>> source_classes(const PolytopeDiagram& diagram,
                                                 const Cluster& target)
{
  std::vector<Cluster> sources;
  for (const auto& v : diagram.nodes())
    if (target.is_proper_subset_of(v))
      sources.push_back(v);   // std::set order, so `sources` is sorted

  const auto position = [&](const Cluster& c) {
    return static_cast<std::size_t>(
        std::lower_bound(sources.begin(), sources.end(), c) - sources.begin());
  };

  DisjointSets sets(sources.size());
  // (c → s) with t ⊂ s ⊂ c links c and s (rule 1); two such edges out of one
  // c are then linked through c, which is rule 2.
  for (const auto& e : diagram.edges()) {
    if (e.is_self() || !target.is_proper_subset_of(e.to))
      continue;
    sets.unite(position(e.from), position(e.to));
  }

  std::map<std::size_t, std::vector<Cluster>> grouped;
  for (std::size_t i = 0; i < sources.size(); ++i)
    grouped[sets.find(i)].push_back(sources[i]);
  std::vector<std::vector<Cluster>> out;
  for (auto& [root, members] : grouped)
    out.push_back(std::move(members));
  return out;
}

}

const std::vector<std::vector<Edge>>& EdgeEquivalenceClasses::classes(const Cluster& target) const
{
  static const std::vector<std::vector<Edge>> none;
  auto it = classes_.find(target);
  return it == classes_.end() ? none : it->second;
}

bool EdgeEquivalenceClasses::equivalent(const Edge& a, const Edge& b) const
{
  if (a == b)
    return true;
  if (a.to != b.to)
    return false;
  for (const auto& cls : classes(a.to)) {
    const bool has_a = std::find(cls.begin(), cls.end(), a) != cls.end();
    const bool has_b = std::find(cls.begin(), cls.end(), b) != cls.end();
    if (has_a || has_b)
      return has_a && has_b;
  }
  return false;
}

std::vector<Cluster> EdgeEquivalenceClasses::targets() const
{
  std::vector<Cluster> out;
  for (const auto& [t, cls] : classes_)
    out.push_back(t);
  return out;
}

EdgeEquivalenceClasses equivalent_edge_classes(const PolytopeDiagram& diagram,
                                               std::span<const Cluster> targets,
                                               bool include_candidates)
{
  EdgeEquivalenceClasses result;
  for (const auto& t : targets) {
    if (!diagram.nodes().contains(t))
      throw InvalidDiagram("target " + t.to_string() + " is not a diagram node");
    auto& out = result.classes_[t];
    for (const auto& sources : source_classes(diagram, t)) {
      std::vector<Edge> cls;
      for (const auto& s : sources)
        if (include_candidates || diagram.has_edge(s, t))
          cls.push_back(Edge{s, t});
      if (!cls.empty())
        out.push_back(std::move(cls));
    }
  }
  return result;
}

bool is_redundant(const PolytopeDiagram& diagram, const Cluster& node)
{
  if (!diagram.nodes().contains(node) || diagram.anchors().contains(node))
    return false;
  const auto in = diagram.incoming(node);
  if (in.size() == 1)
    return true;
  if (in.empty())
    return false;
  const Cluster targets[] = {node};
  return equivalent_edge_classes(diagram, targets).classes(node).size() == 1;
}

std::set<Cluster> redundant_nodes(const PolytopeDiagram& diagram)
{
  std::set<Cluster> out;
  for (const auto& v : diagram.nodes())
    if (is_redundant(diagram, v))
      out.insert(v);
  return out;
}

PolytopeDiagram remove_node(const PolytopeDiagram& diagram, const Cluster& node)
{
  if (diagram.anchors().contains(node))
    throw RefusedTransform("cannot remove anchor cluster " + node.to_string());
  if (!diagram.nodes().contains(node))
    throw RefusedTransform(node.to_string() + " is not a diagram node");
  if (!is_redundant(diagram, node))
    throw RefusedTransform(node.to_string() + " is not certified redundant");

  std::set<Edge> edges;
  for (const auto& e : diagram.edges())
    if (e.from != node && e.to != node)
      edges.insert(e);
  const auto in = diagram.incoming(node);
  const auto out = diagram.outgoing(node);
  for (const auto& a : in)
    for (const auto& b : out)
      edges.insert(Edge{a.from, b.to});

  auto nodes = diagram.nodes();
  nodes.erase(node);
  return PolytopeDiagram(std::move(nodes), std::move(edges), diagram.anchors());
}

PolytopeDiagram reduce_edges(const PolytopeDiagram& diagram)
{
  std::vector<Cluster> targets(diagram.nodes().begin(), diagram.nodes().end());
  std::stable_sort(targets.begin(), targets.end(),
                   [](const Cluster& a, const Cluster& b) { return a.size() < b.size(); });

  // Classes of t depend only on edges into strict supersets of t, which are
  // untouched until later targets, so one computation on the input suffices.
  const auto classes = equivalent_edge_classes(diagram, targets);
  std::set<Edge> edges = diagram.edges();
  for (const auto& t : targets) {
    for (const auto& cls : classes.classes(t)) {
      // classes are sorted, so the first edge has the lexicographically first source
      for (std::size_t i = 1; i < cls.size(); ++i)
        edges.erase(cls[i]);
    }
  }
  return PolytopeDiagram(diagram.nodes(), std::move(edges), diagram.anchors());
}

std::string dump(const PolytopeDiagram& diagram)
{
  std::ostringstream out;
  for (const auto& e : diagram.edges())
    out << e.to_string() << '\n';
  return out.str();
}

}
