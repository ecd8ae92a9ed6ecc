#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "gdd/errors.hpp"
#include "gdd/gdd_engine.hpp"
#include "gdd/oracle.hpp"
#include "gdd/relaxation.hpp"

using namespace gdd;

namespace {

// Pair {0,1} sending to both singletons, tables given as potentials.
struct Potts {
  FactorGraph graph;
  RelaxationSpec spec;
};

Potts potts(std::vector<double> b1, std::vector<double> b2)
{
  Potts p{FactorGraph({2, 2}, {{Cluster{0, 1}, {0, -5, -5, 0}},
                               {Cluster{0}, std::move(b1)},
                               {Cluster{1}, std::move(b2)}}),
          {}};
  p.spec.add(Cluster{0, 1}, {Cluster{0}, Cluster{1}});
  return p;
}

const std::vector<Cluster> singles{Cluster{0}, Cluster{1}};

void check_table(const std::vector<double>& got, const std::vector<double>& want)
{
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(std::abs(got[i] - want[i]) <= 1e-12);
}

}

TEST_CASE("message-free update on the Potts pair")
{
  const auto p = potts({1, 0}, {0, 1});
  auto b = init_beliefs(p.graph, p.spec);
  CHECK(dual_objective(b) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(dual_decrease(b, Cluster{0, 1}, singles) - 1.0) <= 1e-12);

  update_cluster_beliefs(b, Cluster{0, 1}, singles);
  check_table(b.table(Cluster{0}), {0.5, 0.5});
  check_table(b.table(Cluster{1}), {0.5, 0.5});
  check_table(b.table(Cluster{0, 1}), {0, -4, -6, 0});
  CHECK(std::abs(dual_objective(b) - 1.0) <= 1e-12);
}

TEST_CASE("fixed point has zero decrease")
{
  const auto p = potts({1, 0}, {0, 0});
  auto b = init_beliefs(p.graph, p.spec);
  CHECK(std::abs(dual_decrease(b, Cluster{0, 1}, singles)) <= 1e-12);
  const double before = dual_objective(b);
  update_cluster_beliefs(b, Cluster{0, 1}, singles);
  CHECK(std::abs(dual_objective(b) - before) <= 1e-12);
}

TEST_CASE("zero beliefs stay zero")
{
  const auto p = potts({0, 0}, {0, 0});
  const FactorGraph zero({2, 2}, {{Cluster{0, 1}, std::vector<double>(4, 0.0)}});
  auto b = init_beliefs(zero, p.spec);
  update_cluster_beliefs(b, Cluster{0, 1}, singles);
  for (const auto& t : b.tables)
    for (double v : t)
      CHECK(v == 0.0);
  CHECK(dual_objective(b) == 0.0);
  CHECK(dual_decrease(b, Cluster{0, 1}, singles) == 0.0);

  auto m = init_messages(zero, p.spec);
  update_cluster_messages(m, zero, p.spec, Cluster{0, 1});
  for (const auto& [e, t] : m.tables)
    for (double v : t)
      CHECK(v == 0.0);
}

TEST_CASE("message update reproduces the belief update")
{
  const auto p = potts({1, 0}, {0, 1});
  auto m = init_messages(p.graph, p.spec);
  CHECK(m.tables.size() == 2);
  update_cluster_messages(m, p.graph, p.spec, Cluster{0, 1});
  const auto from_messages = beliefs_from_messages(p.graph, p.spec, m);

  auto b = init_beliefs(p.graph, p.spec);
  update_cluster_beliefs(b, Cluster{0, 1}, singles);
  for (const auto& t : b.support) {
    const auto& x = from_messages.table(t);
    const auto& y = b.table(t);
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(std::abs(x[i] - y[i]) <= 1e-9);
  }
}

TEST_CASE("belief state errors")
{
  const auto p = potts({1, 0}, {0, 1});
  auto b = init_beliefs(p.graph, p.spec);
  CHECK_THROWS_AS(b.index(Cluster{5}), InvalidSpec);
  CHECK_THROWS_AS(update_cluster_beliefs(b, Cluster{0, 1}, std::vector<Cluster>{Cluster{2}}),
                  InvalidSpec);
  RelaxationSpec partial;
  partial.add(Cluster{0, 1}, {Cluster{0}});
  const FactorGraph g({2, 2, 2}, {{Cluster{0, 1}, {0, 0, 0, 0}}, {Cluster{2}, {0, 0}}});
  CHECK_THROWS_AS(init_beliefs(g, partial), InvalidSpec);
}

TEST_CASE("dual of an empty support is zero")
{
  CHECK(dual_objective(BeliefState{}) == 0.0);
}

TEST_CASE("decoding")
{
  RelaxationSpec spec;
  spec.add(Cluster{0}, std::span<const Cluster>{});
  const FactorGraph g({2}, {{Cluster{0}, {0.3, 0.7}}});
  CHECK(decode(init_beliefs(g, spec), g).states == std::vector<int>{1});

  const FactorGraph tie({2}, {{Cluster{0}, {0.5, 0.5}}});
  CHECK(decode(init_beliefs(tie, spec), tie).states == std::vector<int>{0});

  // no singleton: read the variable off the smallest containing table
  RelaxationSpec pair;
  pair.add(Cluster{0, 1}, std::span<const Cluster>{});
  const FactorGraph pg({2, 2}, {{Cluster{0, 1}, {0, 0, 3, 0}}});
  CHECK(decode(init_beliefs(pg, pair), pg).states == std::vector<int>{1, 0});

  const FactorGraph uncovered({2, 2}, {{Cluster{0}, {0, 1}}});
  RelaxationSpec only0;
  only0.add(Cluster{0}, std::span<const Cluster>{});
  auto b = init_beliefs(uncovered, only0);
  CHECK_THROWS_AS(decode(b, FactorGraph({2, 2}, {{Cluster{0}, {0, 1}}, {Cluster{1}, {0, 0}}})),
                  InvalidSpec);
}

TEST_CASE("maximisers with tolerance")
{
  const std::vector<double> t{1.0, 1.0 - 1e-12, 0.5, 1.0};
  CHECK(maximisers(t) == std::vector<std::size_t>{0, 1, 3});
  CHECK(maximisers(t, 0.0) == std::vector<std::size_t>{0, 3});
}

TEST_CASE("memory accounting")
{
  const std::vector<std::size_t> ten{10};
  const auto m = closed_form_memory(2, ten);
  CHECK(m.beliefs == 1024);
  CHECK(m.potentials + m.messages == 59048);
  CHECK(m.potentials == 1024);

  const auto p = potts({0, 0}, {0, 0});
  const auto r = memory_report(p.graph, p.spec);
  CHECK(r.beliefs == 8);
  CHECK(r.potentials == 8);
  CHECK(r.messages == 4);

  const auto grid = random_grid(4, 4, 3, 0);
  for (const auto& name : relaxation_names()) {
    const auto mr = memory_report(grid, relaxation_by_name(name, grid));
    CHECK(mr.beliefs <= mr.potentials + mr.messages);
  }
}

TEST_CASE("work per sweep matches counted writes")
{
  const auto g = random_grid(3, 3, 2, 4);
  for (const auto& name : relaxation_names()) {
    const auto spec = relaxation_by_name(name, g);
    GddSolver solver(g, spec, Mode::beliefs);
    solver.sweep();
    CHECK_MESSAGE(solver.writes() == work_per_sweep(g, spec), name);
    solver.sweep();
    CHECK(solver.writes() == 2 * work_per_sweep(g, spec));
  }
  const auto p = potts({0, 0}, {0, 0});
  CHECK(work_per_sweep(p.graph, p.spec) == 8);
}

TEST_CASE("every block update is monotone in both modes")
{
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto g = random_grid(4, 4, 3, seed);
    for (const auto& name : relaxation_names()) {
      for (auto mode : {Mode::beliefs, Mode::messages}) {
        GddSolver solver(g, relaxation_by_name(name, g), mode);
        double worst = -1.0;
        solver.set_update_observer(
            [&](std::size_t, double before, double after) { worst = std::max(worst, after - before); });
        double prev = solver.dual();
        for (int k = 0; k < 10; ++k) {
          const double d = solver.sweep();
          CHECK(d <= prev + 1e-9);
          prev = d;
        }
        CHECK(worst <= 1e-9);
      }
    }
  }
}

TEST_CASE("belief and message modes give the same duals")
{
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto g = fixtures::random_small(seed, 8);
    for (const auto& name : relaxation_names()) {
      GddSolver a(g, relaxation_by_name(name, g), Mode::beliefs);
      GddSolver b(g, relaxation_by_name(name, g), Mode::messages);
      CHECK(std::abs(a.dual() - b.dual()) <= 1e-9);
      for (int k = 0; k < 15; ++k)
        CHECK(std::abs(a.sweep() - b.sweep()) <= 1e-9);
      const auto ba = a.beliefs();
      const auto bb = b.beliefs();
      for (std::size_t i = 0; i < ba.tables.size(); ++i)
        for (std::size_t j = 0; j < ba.tables[i].size(); ++j)
          CHECK(std::abs(ba.tables[i][j] - bb.tables[i][j]) <= 1e-8);
    }
  }
}

TEST_CASE("solver matches the free update functions")
{
  const auto p = potts({1, 0}, {0, 1});
  GddSolver solver(p.graph, p.spec, Mode::beliefs);
  solver.update(0);
  auto b = init_beliefs(p.graph, p.spec);
  update_cluster_beliefs(b, Cluster{0, 1}, singles);
  const auto sb = solver.beliefs();
  for (const auto& t : b.support)
    check_table(sb.table(t), b.table(t));
  CHECK(std::abs(solver.dual() - 1.0) <= 1e-12);
}

TEST_CASE("dual bounds the optimum")
{
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = fixtures::random_small(seed, 8);
    const double opt = brute_force_map(g).value;
    for (const auto& name : relaxation_names()) {
      GddSolver solver(g, relaxation_by_name(name, g), Mode::beliefs);
      CHECK(solver.dual() >= opt - 1e-9);
      for (int k = 0; k < 20; ++k)
        CHECK(solver.sweep() >= opt - 1e-9);
      CHECK(energy(g, solver.decode()) <= opt + 1e-12);
    }
  }
}

TEST_CASE("adding the frustrated cycle's clique closes the gap")
{
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = fixtures::frustrated_cycle(seed);
    const double opt = brute_force_map(g).value;
    GddSolver solver(g, gmplp_spec(g), Mode::beliefs);
    for (int k = 0; k < 200; ++k)
      solver.sweep();
    CHECK(solver.dual() - opt > 0.1);

    // the whole support below the clique
    const auto support = solver.beliefs().support;
    solver.add_cluster(Cluster{0, 1, 2, 3}, support);
    solver.sweep();
    CHECK(solver.dual() - opt <= 1e-9);
    CHECK(energy(g, solver.decode()) == doctest::Approx(opt).epsilon(1e-12));
  }
}

TEST_CASE("add_cluster keeps state and extends T")
{
  const auto g = fixtures::fig2_graph(3);
  GddSolver solver(g, gmplp_spec(g), Mode::messages);
  solver.sweep();
  const double d = solver.dual();
  solver.add_cluster(Cluster{0, 1, 2, 3}, std::vector<Cluster>{Cluster{0, 1, 2}, Cluster{1, 2, 3}});
  CHECK(solver.dual() == doctest::Approx(d).epsilon(1e-12));
  CHECK(solver.spec().is_extended(Cluster{0, 1, 2, 3}));
  CHECK(solver.beliefs().contains(Cluster{0, 1, 2, 3}));
  CHECK(solver.sweep() <= d + 1e-9);
}

TEST_CASE("run produces a well-formed trace")
{
  const auto g = random_grid(4, 4, 3, 2);
  for (auto mode : {Mode::beliefs, Mode::messages}) {
    SolverParams params;
    params.first_max_sweeps = 50;
    const auto r = run(g, max_intersection_spec(g), params, mode, "mi");
    REQUIRE(r.trace.records.size() == static_cast<std::size_t>(r.sweeps) + 1);
    CHECK(r.trace.records.front().sweep == 0);
    CHECK(r.sweeps <= 50);
    for (std::size_t i = 1; i < r.trace.records.size(); ++i) {
      const auto& a = r.trace.records[i - 1];
      const auto& b = r.trace.records[i];
      CHECK(b.sweep == a.sweep + 1);
      CHECK(b.dual <= a.dual + 1e-9);
      CHECK(b.primal >= a.primal);
      CHECK(b.dual >= b.primal - 1e-9);
      CHECK(b.algorithm == "mi");
    }
    CHECK(r.primal == r.trace.records.back().primal);
    CHECK(energy(g, r.assignment) == doctest::Approx(r.primal).epsilon(1e-12));
    if (r.converged) {
      const auto& last = r.trace.records;
      CHECK(std::abs(last[last.size() - 1].dual - last[last.size() - 2].dual) < params.inner_tolerance);
    }
  }
}

TEST_CASE("time limit truncates a run")
{
  const auto g = random_grid(6, 6, 3, 0);
  SolverParams params;
  params.time_limit = 0.0;
  const auto r = run(g, gmplp_spec(g), params, Mode::beliefs);
  CHECK(r.truncated);
  CHECK_FALSE(r.trace.records.empty());
}
