#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "gdd/errors.hpp"
#include "gdd/oracle.hpp"
#include "gdd/polytope_diagram.hpp"
#include "gdd/relaxation.hpp"

using namespace gdd;
using fixtures::one_based;

namespace {

// Middle diagram of the reduction figure: triples, two pairs and {3}, every
// path into {3} present.
PolytopeDiagram chain_diagram()
{
  const auto c123 = one_based({1, 2, 3}), c234 = one_based({2, 3, 4}),
             c345 = one_based({3, 4, 5});
  const auto c23 = one_based({2, 3}), c34 = one_based({3, 4}), c3 = one_based({3});
  std::set<Cluster> nodes{c123, c234, c345, c23, c34, c3};
  std::set<Edge> edges{{c123, c23}, {c234, c23}, {c234, c34}, {c345, c34}, {c123, c3},
                       {c234, c3},  {c345, c3},  {c23, c3},   {c34, c3}};
  return PolytopeDiagram(nodes, edges, {c123, c234, c345, c3});
}

}

TEST_CASE("construction validates nodes and edges")
{
  const Cluster a{0, 1}, b{0};
  CHECK_NOTHROW(PolytopeDiagram({a, b}, {{a, b}}, {a}));
  CHECK_THROWS_AS(PolytopeDiagram({a}, {{a, b}}, {a}), InvalidDiagram);
  CHECK_THROWS_AS(PolytopeDiagram({a, b}, {{b, a}}, {a}), InvalidDiagram);
  CHECK_THROWS_AS(PolytopeDiagram({b}, {}, {a}), InvalidDiagram);
}

TEST_CASE("diagram from the dual decomposition relaxation")
{
  const auto g = fixtures::fig2_graph();
  const auto d = diagram_from_relaxation(dd_spec(g), g);
  CHECK(d.edges().size() == 9);
  for (const auto& triple : {one_based({1, 2, 3}), one_based({2, 3, 4}), one_based({3, 4, 5})})
    for (int v : triple)
      CHECK(d.has_edge(triple, Cluster{v}));
  CHECK(d.outgoing(one_based({3})).empty());

  // round trip: C′ is the set of nodes with an outgoing edge
  const auto back = relaxation_from_diagram(d);
  CHECK(back.size() == 3);
  CHECK_FALSE(back.is_extended(one_based({3})));
  const auto subs = back.sub_clusters(one_based({2, 3, 4}));
  CHECK(std::set<Cluster>(subs.begin(), subs.end()) ==
        std::set<Cluster>{one_based({2}), one_based({3}), one_based({4})});
}

TEST_CASE("gmplp diagram contains self-edges")
{
  const auto g = fixtures::fig2_graph();
  const auto d = diagram_from_relaxation(gmplp_spec(g), g);
  CHECK(d.has_edge(one_based({1, 2, 3}), one_based({1, 2, 3})));
  CHECK(d.has_edge(one_based({3}), one_based({3})));
  // incoming() skips self-edges
  CHECK(d.incoming(one_based({1, 2, 3})).empty());
}

TEST_CASE("empty sub-cluster sets give no edges")
{
  RelaxationSpec spec;
  spec.add(Cluster{0, 1}, std::span<const Cluster>{});
  spec.add(Cluster{1, 2}, std::span<const Cluster>{});
  const auto d = diagram_from_relaxation(spec, std::vector<Cluster>{Cluster{0, 1}});
  CHECK(d.nodes().size() == 2);
  CHECK(d.edges().empty());
  CHECK(relaxation_from_diagram(d).size() == 0);
  CHECK_THROWS_AS(diagram_from_relaxation(spec, std::vector<Cluster>{Cluster{5}}),
                  InvalidDiagram);
}

TEST_CASE("equivalence classes on the chain diagram")
{
  const auto d = chain_diagram();
  const auto c3 = one_based({3});
  const auto cls = equivalent_edge_classes(d, std::vector<Cluster>{c3});
  REQUIRE(cls.classes(c3).size() == 1);
  CHECK(cls.classes(c3)[0].size() == 5);
  CHECK(cls.equivalent({one_based({1, 2, 3}), c3}, {one_based({3, 4, 5}), c3}));

  // single edge into a target: one singleton class
  const auto c23 = one_based({2, 3});
  const auto single = equivalent_edge_classes(
      PolytopeDiagram({one_based({1, 2, 3}), c23}, {{one_based({1, 2, 3}), c23}},
                      {one_based({1, 2, 3})}),
      std::vector<Cluster>{c23});
  REQUIRE(single.classes(c23).size() == 1);
  CHECK(single.classes(c23)[0].size() == 1);

  CHECK_THROWS_AS(equivalent_edge_classes(d, std::vector<Cluster>{one_based({9})}),
                  InvalidDiagram);
}

TEST_CASE("rule-based classes agree with the definition")
{
  const auto d = chain_diagram();
  const auto c3 = one_based({3});
  const std::vector<int> cards(5, 2);
  const auto cls = equivalent_edge_classes(d, std::vector<Cluster>{c3});
  const auto& members = cls.classes(c3)[0];
  for (std::size_t i = 1; i < members.size(); ++i)
    CHECK_MESSAGE(edges_equivalent_by_definition(d, members[0], members[i], cards),
                  members[i].to_string());
}

TEST_CASE("disjoint sources into a shared target are not merged")
{
  // {1,2} and {2,3} both send to {2} with nothing linking them
  const Cluster a{0, 1}, b{1, 2}, t{1};
  const PolytopeDiagram d({a, b, t}, {{a, t}, {b, t}}, {a, b});
  const auto cls = equivalent_edge_classes(d, std::vector<Cluster>{t});
  CHECK(cls.classes(t).size() == 2);
  CHECK_FALSE(is_redundant(d, t));
  CHECK(reduce_edges(d) == d);
  CHECK_FALSE(edges_equivalent_by_definition(d, {a, t}, {b, t}, std::vector<int>(3, 2)));
}

TEST_CASE("redundant nodes")
{
  const Cluster c{0, 1, 2}, v{0, 1}, s1{0}, s2{1};
  const PolytopeDiagram d({c, v, s1, s2}, {{c, v}, {v, s1}, {v, s2}}, {c, s1, s2});
  CHECK(redundant_nodes(d) == std::set<Cluster>{v});

  const auto removed = remove_node(d, v);
  CHECK_FALSE(removed.nodes().contains(v));
  CHECK(removed.edges() == std::set<Edge>{{c, s1}, {c, s2}});
  CHECK(removal_preserves_polytope(d, removed, std::vector<int>(3, 2)));

  // anchors are never reported, never removed
  CHECK_FALSE(is_redundant(d, c));
  CHECK_THROWS_AS(remove_node(d, c), RefusedTransform);
  CHECK_THROWS_AS(remove_node(d, Cluster{2}), RefusedTransform);

  // incoming edges only
  const PolytopeDiagram sink({c, v}, {{c, v}}, {c});
  const auto gone = remove_node(sink, v);
  CHECK(gone.nodes() == std::set<Cluster>{c});
  CHECK(gone.edges().empty());

  // no incoming edge: not reported
  const PolytopeDiagram orphan({c, v}, {}, {c});
  CHECK(redundant_nodes(orphan).empty());
}

TEST_CASE("power-set diagram of the 3x3 grid cliques")
{
  const auto g = fixtures::fig5_graph();
  const auto d = diagram_from_relaxation(powerset_spec(g), g);
  const auto red = redundant_nodes(d);
  for (const auto& v : {one_based({2, 4, 5}), one_based({2, 5, 6}), one_based({4, 5, 8}),
                        one_based({5, 6, 8}), one_based({5})})
    CHECK_MESSAGE(red.contains(v), v.to_string());
  for (const auto& c : g.clusters())
    CHECK_FALSE(red.contains(c));

  const auto after = remove_node(d, one_based({5, 6, 8}));
  CHECK(removal_preserves_polytope(d, after, g.cardinalities()));
}

TEST_CASE("reduce_edges on the chain diagram keeps one edge into {3}")
{
  const auto d = chain_diagram();
  const auto r = reduce_edges(d);
  CHECK(r.incoming(one_based({3})).size() == 1);
  CHECK(r.incoming(one_based({2, 3})).size() == 2);
  CHECK(r.incoming(one_based({3, 4})).size() == 2);
  const std::vector<int> cards(5, 2);
  CHECK(affine_system_equal(constraint_system(d, cards), constraint_system(r, cards)));
  CHECK(dump(r).find("{1,2,3} -> {3}") != std::string::npos);
}

TEST_CASE("reduce_edges on the power-set lattice keeps the polytope")
{
  const auto g = fixtures::fig2_graph();
  const auto d = diagram_from_relaxation(all_subsets_spec(g), g);
  const auto r = reduce_edges(d);
  CHECK(r.edges().size() < d.edges().size());
  // {2,3} is reached from two triples with nothing linking them
  CHECK(r.incoming(one_based({2, 3})).size() == 2);
  CHECK(r.incoming(one_based({3})).size() == 1);
  CHECK(affine_system_equal(constraint_system(d, g.cardinalities()),
                            constraint_system(r, g.cardinalities())));
}

TEST_CASE("dump is one line per edge")
{
  const Cluster a{0, 1}, b{0};
  const PolytopeDiagram d({a, b}, {{a, b}}, {a});
  CHECK(dump(d) == "{1,2} -> {1}\n");
}
