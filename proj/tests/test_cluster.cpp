#include <doctest.h>

#include "gdd/cluster.hpp"
#include "gdd/errors.hpp"

using namespace gdd;

TEST_CASE("clusters are sorted sets")
{
  const Cluster c{3, 1, 2};
  CHECK(c.size() == 3);
  CHECK(c[0] == 1);
  CHECK(c.to_string() == "{2,3,4}");
  CHECK(c.to_string(true) == "{1,2,3}");
  CHECK_THROWS_AS(Cluster({1, 1}), InvalidModel);
  CHECK_THROWS_AS(Cluster({-1, 2}), InvalidModel);
}

TEST_CASE("subset relations and set operations")
{
  const Cluster a{0, 1, 2};
  const Cluster b{1, 2};
  CHECK(b.is_subset_of(a));
  CHECK(b.is_proper_subset_of(a));
  CHECK(a.is_subset_of(a));
  CHECK_FALSE(a.is_proper_subset_of(a));
  CHECK(intersection(a, Cluster{2, 5}) == Cluster{2});
  CHECK(intersection(a, Cluster{7}).empty());
  CHECK(cluster_union(b, Cluster{4}) == Cluster{1, 2, 4});
}

TEST_CASE("lexicographic and larger-first orders")
{
  CHECK(Cluster{0, 1} < Cluster{0, 1, 2});
  CHECK(Cluster{0, 1, 2} < Cluster{0, 2});
  CHECK(LargerFirst{}(Cluster{5, 6, 7}, Cluster{0, 1}));
  CHECK(LargerFirst{}(Cluster{0, 1}, Cluster{0, 2}));
}

TEST_CASE("row-major table indexing, last variable fastest")
{
  const std::vector<int> cards{2, 3, 4};
  const Cluster scope{0, 2};
  CHECK(table_size(scope, cards) == 8);
  const std::vector<int> states{1, 0, 3};
  CHECK(config_index(scope, cards, states) == 1 * 4 + 3);
  CHECK(config_states(scope, cards, 7) == std::vector<int>{1, 3});
  CHECK(config_states(Cluster{0, 1, 2}, cards, 0) == std::vector<int>{0, 0, 0});
}

TEST_CASE("projection maps agree with direct indexing")
{
  const std::vector<int> cards{2, 3, 2, 3};
  const Cluster from{0, 1, 2, 3};
  for (const Cluster& to : {Cluster{1, 3}, Cluster{0}, Cluster{0, 1, 2, 3}, Cluster{2}}) {
    const auto map = projection_map(from, to, cards);
    REQUIRE(map.size() == table_size(from, cards));
    for (std::size_t x = 0; x < map.size(); ++x) {
      const auto s = config_states(from, cards, x);
      std::vector<int> full(4);
      for (std::size_t i = 0; i < from.size(); ++i)
        full[from[i]] = s[i];
      CHECK(map[x] == config_index(to, cards, full));
    }
  }
  CHECK_THROWS_AS(projection_map(Cluster{0, 1}, Cluster{2}, cards), InvalidSpec);
}
