#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gdd/errors.hpp"
#include "gdd/factor_graph.hpp"
#include "gdd/oracle.hpp"
#include "gdd/random.hpp"

using namespace gdd;

TEST_CASE("energy is a table lookup per cluster")
{
  const FactorGraph g({2, 2}, {{Cluster{0, 1}, {0, 1, 2, 3}}});
  CHECK(energy(g, Assignment{{1, 0}}) == 2.0);
  CHECK(energy(g, Assignment{{1, 1}}) == 3.0);
  CHECK_THROWS_AS(energy(g, Assignment{{2, 0}}), InvalidAssignment);
  CHECK_THROWS_AS(energy(g, Assignment{{0}}), InvalidAssignment);
}

TEST_CASE("zero potentials give zero energy")
{
  const FactorGraph g({3, 3, 3}, {{Cluster{0, 1}, std::vector<double>(9, 0.0)},
                                  {Cluster{1, 2}, std::vector<double>(9, 0.0)}});
  CHECK(energy(g, Assignment{{2, 1, 0}}) == 0.0);
}

TEST_CASE("energy at the enumerated maximiser equals the reported optimum")
{
  const auto g = fixtures::fig2_graph(0);
  const auto map = brute_force_map(g);
  CHECK(energy(g, map.argmax) == doctest::Approx(map.value).epsilon(1e-15));
}

TEST_CASE("restrict_to picks states in scope order")
{
  const Assignment x{{0, 1, 2}};
  CHECK(restrict_to(x, Cluster{0, 2}) == std::vector<int>{0, 2});
  CHECK(restrict_to(x, Cluster{0, 1, 2}) == x.states);
  CHECK(restrict_to(Assignment{{1, 1}}, Cluster{1}) == std::vector<int>{1});
  CHECK_THROWS_AS(restrict_to(x, Cluster{3}), InvalidAssignment);

  // restricting twice equals restricting once
  const Assignment y{{3, 1, 4, 1, 5}};
  const Cluster c{0, 2, 4};
  const auto once = restrict_to(y, Cluster{2, 4});
  Assignment on_c{std::vector<int>(5, -1)};
  const auto rc = restrict_to(y, c);
  for (std::size_t i = 0; i < c.size(); ++i)
    on_c.states[c[i]] = rc[i];
  CHECK(restrict_to(on_c, Cluster{2, 4}) == once);
}

TEST_CASE("validation reports each violation")
{
  ModelDescription m;
  m.cardinalities = {2, 2, 2, 2, 2};
  m.factors.push_back({{0, 9}, {0, 0, 0, 0}});
  m.factors.push_back({{0, 1}, {0, 0, 0}});
  m.factors.push_back({{1, 1}, {0, 0, 0, 0}});
  m.factors.push_back({{}, {}});
  m.factors.push_back({{2}, {0.0, std::nan("")}});
  const auto v = validate(m);
  REQUIRE(v.size() == 5);
  CHECK(v[0].cluster_index == 0);
  CHECK(v[0].kind == ViolationKind::index_out_of_range);
  CHECK(to_string(v[0].kind) == "index out of range");
  CHECK(v[1].kind == ViolationKind::table_size);
  CHECK(to_string(v[1].kind) == "table size");
  CHECK(v[2].kind == ViolationKind::repeated_variable);
  CHECK(v[3].kind == ViolationKind::empty_cluster);
  CHECK(v[4].kind == ViolationKind::non_finite);
  CHECK_THROWS_AS(FactorGraph{m}, InvalidModel);

  ModelDescription bad_card;
  bad_card.cardinalities = {2, 0};
  CHECK(validate(bad_card).at(0).kind == ViolationKind::bad_cardinality);
}

TEST_CASE("duplicate scopes merge by summing")
{
  ModelDescription m;
  m.cardinalities = {2, 2};
  m.factors.push_back({{0, 1}, {1, 2, 3, 4}});
  m.factors.push_back({{1}, {5, 6}});
  m.factors.push_back({{1, 0}, {10, 20, 30, 40}});   // reversed scope
  const FactorGraph g(m);
  REQUIRE(g.num_clusters() == 2);
  CHECK(g.potential(0).scope == Cluster{0, 1});
  // reversed table: entry (x1, x0) -> sorted (x0, x1)
  CHECK(g.potential(0).values == std::vector<double>{11, 32, 23, 44});
  CHECK(validate(g).empty());
}

TEST_CASE("energy is linear in the potentials")
{
  const auto a = fixtures::fig2_graph(1);
  const auto b = fixtures::fig2_graph(2);
  std::vector<PotentialTable> sum;
  for (std::size_t i = 0; i < a.num_clusters(); ++i) {
    auto p = a.potential(i);
    for (std::size_t j = 0; j < p.values.size(); ++j)
      p.values[j] += b.potential(i).values[j];
    sum.push_back(p);
  }
  const FactorGraph ab({2, 2, 2, 2, 2}, sum);
  Xorshift64Star rng(9);
  for (int k = 0; k < 20; ++k) {
    Assignment x{std::vector<int>(5)};
    for (auto& s : x.states)
      s = static_cast<int>(rng.below(2));
    CHECK(energy(ab, x) == doctest::Approx(energy(a, x) + energy(b, x)).epsilon(1e-14));
  }
}

TEST_CASE("random grid structure")
{
  const auto g = random_grid(2, 2, 3, 7);
  CHECK(g.num_clusters() == 9);
  int nodes = 0, edges = 0, squares = 0;
  for (const auto& p : g.potentials()) {
    if (p.scope.size() == 1) {
      ++nodes;
      CHECK(p.values.size() == 3);
    } else if (p.scope.size() == 2) {
      ++edges;
      CHECK(p.values.size() == 9);
    } else {
      ++squares;
      CHECK(p.values.size() == 81);
    }
  }
  CHECK(nodes == 4);
  CHECK(edges == 4);
  CHECK(squares == 1);

  for (int k : {2, 4})
    for (std::uint64_t s : {0ull, 99ull})
      CHECK(random_grid(2, 2, k, s).num_clusters() == 9);

  for (auto [w, h] : {std::pair{3, 5}, std::pair{6, 6}, std::pair{16, 16}}) {
    const auto grid = random_grid(w, h, 2, 1);
    CHECK(grid.num_clusters() ==
          static_cast<std::size_t>(w * h + (w * (h - 1) + h * (w - 1)) + (w - 1) * (h - 1)));
  }

  CHECK(random_grid(5, 4, 3, 11) == random_grid(5, 4, 3, 11));
  CHECK_FALSE(random_grid(5, 4, 3, 11) == random_grid(5, 4, 3, 12));
  CHECK_THROWS_AS(random_grid(1, 4, 3, 0), InvalidModel);
  CHECK_THROWS_AS(random_grid(4, 4, 1, 0), InvalidModel);
}

TEST_CASE("grid entries look standard normal")
{
  const auto g = random_grid(16, 16, 3, 0);
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (const auto& p : g.potentials()) {
    for (double v : p.values) {
      sum += v;
      sq += v * v;
      ++n;
    }
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.05);
}
