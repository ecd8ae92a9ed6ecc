#include "gdd/factor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "gdd/errors.hpp"
#include "gdd/random.hpp"

namespace gdd {

namespace {

constexpr std::size_t model_level = std::numeric_limits<std::size_t>::max();

// Re-index a table given over `variables` (any order) into row-major order
// over the sorted scope.
std::vector<double> permute_to_sorted(const std::vector<int>& variables,
                                      const std::vector<double>& values,
                                      std::span<const int> cardinalities)
{
  if (std::is_sorted(variables.begin(), variables.end()))
    return values;

  const std::size_t n = variables.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return variables[a] < variables[b]; });

  // stride of each given-order position inside the sorted table
  std::vector<std::size_t> sorted_stride(n);
  std::size_t s = 1;
  for (std::size_t i = n; i-- > 0;) {
    sorted_stride[order[i]] = s;
    s *= cardinalities[variables[order[i]]];
  }

  std::vector<double> out(values.size());
  std::vector<int> digit(n, 0);
  std::size_t target = 0;
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    out[target] = values[idx];
    for (std::size_t i = n; i-- > 0;) {
      if (++digit[i] < cardinalities[variables[i]]) {
        target += sorted_stride[i];
        break;
      }
      target -= sorted_stride[i] * (digit[i] - 1);
      digit[i] = 0;
    }
  }
  return out;
}

std::string describe(const std::vector<Violation>& violations)
{
  std::ostringstream out;
  out << "invalid model:";
  for (const auto& v : violations) {
    out << "\n  ";
    if (v.cluster_index != model_level)
      out << "cluster " << v.cluster_index << ": ";
    out << to_string(v.kind) << " (" << v.message << ")";
  }
  return out.str();
}

}

std::string to_string(ViolationKind kind)
{
  switch (kind) {
    case ViolationKind::bad_cardinality:    return "bad cardinality";
    case ViolationKind::empty_cluster:      return "empty cluster";
    case ViolationKind::index_out_of_range: return "index out of range";
    case ViolationKind::repeated_variable:  return "repeated variable";
    case ViolationKind::table_size:         return "table size";
    case ViolationKind::non_finite:         return "non-finite entry";
  }
  return "unknown";
}

std::vector<Violation> validate(const ModelDescription& model)
{
  std::vector<Violation> out;
  const auto num_vars = model.cardinalities.size();
  for (std::size_t i = 0; i < num_vars; ++i) {
    if (model.cardinalities[i] < 1)
      out.push_back({model_level, ViolationKind::bad_cardinality,
                     "variable " + std::to_string(i) + " has cardinality " +
                         std::to_string(model.cardinalities[i])});
  }

  for (std::size_t f = 0; f < model.factors.size(); ++f) {
    const auto& factor = model.factors[f];
    if (factor.variables.empty()) {
      out.push_back({f, ViolationKind::empty_cluster, "no variables"});
      continue;
    }
    bool indices_ok = true;
    for (int v : factor.variables) {
      if (v < 0 || static_cast<std::size_t>(v) >= num_vars) {
        out.push_back({f, ViolationKind::index_out_of_range,
                       "variable " + std::to_string(v) + " in a " + std::to_string(num_vars) +
                           "-variable graph"});
        indices_ok = false;
      }
    }
    auto sorted = factor.variables;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      out.push_back({f, ViolationKind::repeated_variable, "scope repeats a variable"});
      indices_ok = false;
    }
    if (indices_ok) {
      std::size_t expected = 1;
      for (int v : factor.variables)
        expected *= static_cast<std::size_t>(std::max(model.cardinalities[v], 0));
      if (factor.values.size() != expected)
        out.push_back({f, ViolationKind::table_size,
                       "expected " + std::to_string(expected) + " entries, got " +
                           std::to_string(factor.values.size())});
    }
    for (double x : factor.values) {
      if (!std::isfinite(x)) {
        out.push_back({f, ViolationKind::non_finite, "table holds a non-finite value"});
        break;
      }
    }
  }
  return out;
}

FactorGraph::FactorGraph(const ModelDescription& model)
{
  if (auto violations = validate(model); !violations.empty())
    throw InvalidModel(describe(violations));

  cardinalities_ = model.cardinalities;
  std::map<Cluster, std::size_t> position;
  for (const auto& factor : model.factors) {
    Cluster scope(factor.variables);
    auto values = permute_to_sorted(factor.variables, factor.values, cardinalities_);
    auto [it, inserted] = position.emplace(scope, potentials_.size());
    if (inserted) {
      potentials_.push_back({std::move(scope), std::move(values)});
    } else {
      auto& existing = potentials_[it->second].values;
      for (std::size_t i = 0; i < existing.size(); ++i)
        existing[i] += values[i];
    }
  }
}

namespace {

ModelDescription to_description(std::vector<int> cardinalities,
                                std::vector<PotentialTable> potentials)
{
  ModelDescription model;
  model.cardinalities = std::move(cardinalities);
  model.factors.reserve(potentials.size());
  for (auto& p : potentials) {
    model.factors.push_back(
        {std::vector<int>(p.scope.begin(), p.scope.end()), std::move(p.values)});
  }
  return model;
}

}

FactorGraph::FactorGraph(std::vector<int> cardinalities, std::vector<PotentialTable> potentials)
: FactorGraph(to_description(std::move(cardinalities), std::move(potentials)))
{ }

std::vector<Cluster> FactorGraph::clusters() const
{
  std::vector<Cluster> out;
  out.reserve(potentials_.size());
  for (const auto& p : potentials_)
    out.push_back(p.scope);
  return out;
}

const PotentialTable* FactorGraph::find(const Cluster& scope) const
{
  for (const auto& p : potentials_) {
    if (p.scope == scope)
      return &p;
  }
  return nullptr;
}

std::uint64_t FactorGraph::state_space_size() const
{
  std::uint64_t n = 1;
  for (int k : cardinalities_) {
    if (k != 0 && n > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(k))
      return std::numeric_limits<std::uint64_t>::max();
    n *= static_cast<std::uint64_t>(k);
  }
  return n;
}

std::vector<Violation> validate(const FactorGraph& graph)
{
  ModelDescription model;
  model.cardinalities.assign(graph.cardinalities().begin(), graph.cardinalities().end());
  for (const auto& p : graph.potentials())
    model.factors.push_back({std::vector<int>(p.scope.begin(), p.scope.end()), p.values});
  return validate(model);
}

double energy(const FactorGraph& graph, const Assignment& x)
{
  const auto cards = graph.cardinalities();
  if (x.size() != cards.size())
    throw InvalidAssignment("assignment has " + std::to_string(x.size()) + " states, graph has " +
                            std::to_string(cards.size()) + " variables");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] >= cards[i])
      throw InvalidAssignment("state " + std::to_string(x[i]) + " out of range for variable " +
                              std::to_string(i));
  }
  double total = 0.0;
  for (const auto& p : graph.potentials())
    total += p.values[config_index(p.scope, cards, x.states)];
  return total;
}

std::vector<int> restrict_to(const Assignment& x, const Cluster& s)
{
  std::vector<int> out;
  out.reserve(s.size());
  for (int v : s) {
    if (static_cast<std::size_t>(v) >= x.size())
      throw InvalidAssignment(s.to_string() + " is not a subset of the assignment's variables");
    out.push_back(x[v]);
  }
  return out;
}

FactorGraph random_grid(int width, int height, int states, std::uint64_t seed)
{
  if (width < 2 || height < 2 || states < 2)
    throw InvalidModel("random_grid needs width, height >= 2 and states >= 2");

  const auto at = [width](int x, int y) { return y * width + x; };
  std::vector<Cluster> scopes;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      scopes.push_back(Cluster{at(x, y)});
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x + 1 < width)
        scopes.push_back(Cluster{at(x, y), at(x + 1, y)});
      if (y + 1 < height)
        scopes.push_back(Cluster{at(x, y), at(x, y + 1)});
    }
  }
  for (int y = 0; y + 1 < height; ++y)
    for (int x = 0; x + 1 < width; ++x)
      scopes.push_back(Cluster{at(x, y), at(x + 1, y), at(x, y + 1), at(x + 1, y + 1)});

  std::vector<int> cards(static_cast<std::size_t>(width) * height, states);
  Xorshift64Star rng(seed);
  std::vector<PotentialTable> potentials;
  potentials.reserve(scopes.size());
  for (auto& scope : scopes) {
    std::vector<double> values(table_size(scope, cards));
    for (auto& v : values)
      v = rng.normal();
    potentials.push_back({std::move(scope), std::move(values)});
  }
  return FactorGraph(std::move(cards), std::move(potentials));
}

}
