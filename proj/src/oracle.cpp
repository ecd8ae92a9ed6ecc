#include "gdd/oracle.hpp"

#include <algorithm>
#include <gmpxx.h>
#include <limits>
#include <map>
#include <unordered_map>

#include "gdd/errors.hpp"

namespace gdd {

MapSolution brute_force_map(const FactorGraph& graph, std::uint64_t cap)
{
  const auto total = graph.state_space_size();
  if (total > cap)
    throw CapacityError("state space has " +
                        (total == std::numeric_limits<std::uint64_t>::max()
                             ? std::string("more than 2^64")
                             : std::to_string(total)) +
                        " configurations, above the cap of " + std::to_string(cap));

  const auto cards = graph.cardinalities();
  const std::size_t n = cards.size();

  // per variable: (potential, stride) pairs so the table indices can be
  // updated incrementally along the odometer
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> touches(n);
  for (std::size_t p = 0; p < graph.num_clusters(); ++p) {
    const auto& scope = graph.potential(p).scope;
    std::size_t stride = 1;
    for (std::size_t i = scope.size(); i-- > 0;) {
      touches[scope[i]].push_back({p, stride});
      stride *= cards[scope[i]];
    }
  }

  std::vector<std::size_t> index(graph.num_clusters(), 0);
  std::vector<int> x(n, 0);
  const auto value = [&] {
    double v = 0.0;
    for (std::size_t p = 0; p < index.size(); ++p)
      v += graph.potential(p).values[index[p]];
    return v;
  };

  MapSolution best{Assignment{x}, value()};
  for (std::uint64_t step = 1; step < total; ++step) {
    for (std::size_t i = n; i-- > 0;) {
      if (++x[i] < cards[i]) {
        for (auto [p, s] : touches[i])
          index[p] += s;
        break;
      }
      for (auto [p, s] : touches[i])
        index[p] -= s * static_cast<std::size_t>(cards[i] - 1);
      x[i] = 0;
    }
    const double v = value();
    if (v > best.value) {
      best.value = v;
      best.argmax.states = x;
    }
  }
  return best;
}

AffineConstraintSystem constraint_system(const PolytopeDiagram& diagram,
                                         std::span<const int> cardinalities)
{
  AffineConstraintSystem out;
  out.anchors = diagram.anchors();

  std::map<Cluster, std::size_t> offset;
  std::size_t columns = 0;
  for (const auto& v : diagram.nodes()) {
    for (int i : v)
      if (i < 0 || static_cast<std::size_t>(i) >= cardinalities.size())
        throw InvalidDiagram("node " + v.to_string() + " has a variable without cardinality");
    offset[v] = columns;
    columns += table_size(v, cardinalities);
    if (columns > oracle_variable_cap)
      throw CapacityError("constraint system exceeds " + std::to_string(oracle_variable_cap) +
                          " variables");
  }
  out.variables.reserve(columns);
  for (const auto& v : diagram.nodes()) {
    const auto size = table_size(v, cardinalities);
    for (std::size_t x = 0; x < size; ++x)
      out.variables.emplace_back(v, x);
  }

  for (const auto& e : diagram.edges()) {
    if (!e.to.is_subset_of(e.from))
      throw InvalidDiagram("edge " + e.to_string() + " targets a non-subset");
    const auto target_size = table_size(e.to, cardinalities);
    const std::size_t first = out.rows.size();
    out.rows.resize(first + target_size);
    if (e.is_self())
      continue;
    const auto map = projection_map(e.from, e.to, cardinalities);
    const auto from = offset.at(e.from);
    for (std::size_t x = 0; x < map.size(); ++x)
      out.rows[first + map[x]].push_back({from + x, 1});
    const auto to = offset.at(e.to);
    for (std::size_t x = 0; x < target_size; ++x)
      out.rows[first + x].push_back({to + x, -1});
  }
  return out;
}

namespace {

using Key = AffineConstraintSystem::Key;
using SparseRow = std::map<std::size_t, mpq_class>;

// Incremental row echelon basis over Q. The pivot of a stored row is its
// smallest column; rows are reduced against existing pivots on insertion.
class EchelonBasis {
public:
  // Returns the reduced row (empty when dependent) and stores it if not.
  const SparseRow* insert(SparseRow row)
  {
    auto it = row.begin();
    while (it != row.end()) {
      auto pivot = pivots_.find(it->first);
      if (pivot == pivots_.end()) {
        ++it;
        continue;
      }
      const std::size_t column = it->first;
      const mpq_class factor = it->second;
      for (const auto& [c, v] : rows_[pivot->second]) {
        auto& entry = row[c];
        entry -= factor * v;
        if (entry == 0)
          row.erase(c);
      }
      it = row.upper_bound(column);
    }
    if (row.empty())
      return nullptr;
    const mpq_class lead = row.begin()->second;
    for (auto& [c, v] : row)
      v /= lead;
    pivots_[row.begin()->first] = rows_.size();
    rows_.push_back(std::move(row));
    return &rows_.back();
  }

  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseRow>& rows() const { return rows_; }

private:
  std::vector<SparseRow> rows_;
  std::unordered_map<std::size_t, std::size_t> pivots_;
};

// A system rewritten over a shared key space.
using KeyedRows = std::vector<std::map<Key, mpq_class>>;

KeyedRows keyed(const AffineConstraintSystem& system)
{
  KeyedRows out;
  out.reserve(system.rows.size());
  for (const auto& row : system.rows) {
    std::map<Key, mpq_class> r;
    for (const auto& term : row) {
      auto& entry = r[system.variables.at(term.column)];
      entry += term.coefficient;
      if (entry == 0)
        r.erase(system.variables[term.column]);
    }
    if (!r.empty())
      out.push_back(std::move(r));
  }
  return out;
}

// Existentially eliminates every variable whose cluster is not an anchor.
// Non-anchor columns are ordered first, so a stored row with an anchor pivot
// holds anchor columns only, and those rows span the projected constraints.
KeyedRows project_to_anchors(const AffineConstraintSystem& system)
{
  std::vector<std::size_t> order(system.variables.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < system.variables.size(); ++i)
    if (!system.anchors.contains(system.variables[i].first))
      order[i] = next++;
  const std::size_t eliminated = next;
  for (std::size_t i = 0; i < system.variables.size(); ++i)
    if (system.anchors.contains(system.variables[i].first))
      order[i] = next++;
  std::vector<std::size_t> inverse(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    inverse[order[i]] = i;

  EchelonBasis basis;
  KeyedRows out;
  for (const auto& row : system.rows) {
    SparseRow r;
    for (const auto& term : row) {
      auto& entry = r[order[term.column]];
      entry += term.coefficient;
      if (entry == 0)
        r.erase(order[term.column]);
    }
    const SparseRow* stored = basis.insert(std::move(r));
    if (stored && stored->begin()->first >= eliminated) {
      std::map<Key, mpq_class> k;
      for (const auto& [c, v] : *stored)
        k.emplace(system.variables[inverse[c]], v);
      out.push_back(std::move(k));
    }
  }
  return out;
}

KeyedRows prepare(const AffineConstraintSystem& system, Projection projection)
{
  return projection == Projection::anchors ? project_to_anchors(system) : keyed(system);
}

void check_anchors(const AffineConstraintSystem& a, const AffineConstraintSystem& b,
                   Projection projection)
{
  if (projection != Projection::anchors)
    return;
  if (a.anchors != b.anchors)
    throw InvalidDiagram("systems are anchored on different cluster sets");
}

struct Ranks {
  std::size_t a;
  std::size_t b;
  std::size_t stacked;
};

Ranks ranks(const KeyedRows& a, const KeyedRows& b)
{
  std::map<Key, std::size_t> column;
  for (const auto* rows : {&a, &b})
    for (const auto& r : *rows)
      for (const auto& [k, v] : r)
        column.emplace(k, 0);
  std::size_t next = 0;
  for (auto& [k, c] : column)
    c = next++;

  const auto to_sparse = [&](const std::map<Key, mpq_class>& r) {
    SparseRow s;
    for (const auto& [k, v] : r)
      s.emplace(column.at(k), v);
    return s;
  };

  EchelonBasis only_a, only_b, both;
  for (const auto& r : a) {
    only_a.insert(to_sparse(r));
    both.insert(to_sparse(r));
  }
  for (const auto& r : b) {
    only_b.insert(to_sparse(r));
    both.insert(to_sparse(r));
  }
  return {only_a.rank(), only_b.rank(), both.rank()};
}

}

bool affine_system_equal(const AffineConstraintSystem& a, const AffineConstraintSystem& b,
                         Projection projection)
{
  check_anchors(a, b, projection);
  const auto r = ranks(prepare(a, projection), prepare(b, projection));
  return r.a == r.b && r.b == r.stacked;
}

bool affine_system_implies(const AffineConstraintSystem& a, const AffineConstraintSystem& b,
                           Projection projection)
{
  check_anchors(a, b, projection);
  const auto r = ranks(prepare(a, projection), prepare(b, projection));
  return r.a == r.stacked;
}

std::size_t affine_rank(const AffineConstraintSystem& system)
{
  EchelonBasis basis;
  for (const auto& row : system.rows) {
    SparseRow r;
    for (const auto& term : row) {
      auto& entry = r[term.column];
      entry += term.coefficient;
      if (entry == 0)
        r.erase(term.column);
    }
    basis.insert(std::move(r));
  }
  return basis.rank();
}

bool edges_equivalent_by_definition(const PolytopeDiagram& diagram, const Edge& e1,
                                    const Edge& e2, std::span<const int> cardinalities)
{
  if (e1.to != e2.to)
    throw InvalidDiagram("edges " + e1.to_string() + " and " + e2.to_string() +
                         " have different targets");
  std::set<Edge> base;
  for (const auto& e : diagram.edges())
    if (e.to != e1.to)
      base.insert(e);
  auto with1 = base;
  with1.insert(e1);
  auto with2 = std::move(base);
  with2.insert(e2);
  const PolytopeDiagram d1(diagram.nodes(), std::move(with1), diagram.anchors());
  const PolytopeDiagram d2(diagram.nodes(), std::move(with2), diagram.anchors());
  return affine_system_equal(constraint_system(d1, cardinalities),
                             constraint_system(d2, cardinalities), Projection::all_variables);
}

bool removal_preserves_polytope(const PolytopeDiagram& before, const PolytopeDiagram& after,
                                std::span<const int> cardinalities)
{
  return affine_system_equal(constraint_system(before, cardinalities),
                             constraint_system(after, cardinalities), Projection::anchors);
}

}
