#include "gdd/gdd_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "gdd/errors.hpp"

namespace gdd {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double max_of(std::span<const double> table)
{
  double m = neg_inf;
  for (double v : table)
    m = std::max(m, v);
  return m;
}

std::size_t argmax_of(std::span<const double> table)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table[i] > table[best])
      best = i;
  return best;
}

// out_j[x_s] = max over x_c ↦ x_s of tmp[x_c], one table per projection.
void max_marginals(std::span<const double> tmp,
                   std::span<const std::vector<std::uint32_t>* const> maps,
                   std::vector<std::vector<double>>& out)
{
  for (std::size_t j = 0; j < maps.size(); ++j) {
    auto& mm = out[j];
    std::fill(mm.begin(), mm.end(), neg_inf);
    const auto& map = *maps[j];
    for (std::size_t x = 0; x < tmp.size(); ++x)
      mm[map[x]] = std::max(mm[map[x]], tmp[x]);
  }
}

std::vector<Cluster> proper_subs(const Cluster& c, std::span<const Cluster> subs)
{
  std::vector<Cluster> out;
  for (const auto& s : subs) {
    if (s == c)
      continue;
    if (!s.is_subset_of(c))
      throw InvalidSpec(s.to_string() + " is not a subset of " + c.to_string());
    out.push_back(s);
  }
  return out;
}

void check_coverage(const FactorGraph& graph, const RelaxationSpec& spec)
{
  const auto t = spec.support();
  const std::set<Cluster> support(t.begin(), t.end());
  for (const auto& p : graph.potentials())
    if (!support.contains(p.scope))
      throw InvalidSpec("relaxation does not cover cluster " + p.scope.to_string());
}

std::vector<double> theta_hat(const FactorGraph& graph, const Cluster& t)
{
  if (const auto* p = graph.find(t))
    return p->values;
  return std::vector<double>(table_size(t, graph.cardinalities()), 0.0);
}

// Which table decodes each variable, and the variable's slot in its scope.
struct DecodePlan {
  std::vector<std::size_t> source;
  std::vector<std::size_t> slot;
};

DecodePlan plan_decoding(std::span<const Cluster> support, std::size_t num_vars)
{
  DecodePlan plan;
  plan.source.assign(num_vars, SIZE_MAX);
  plan.slot.assign(num_vars, 0);
  for (std::size_t t = 0; t < support.size(); ++t) {
    const auto& scope = support[t];
    for (std::size_t k = 0; k < scope.size(); ++k) {
      const auto i = static_cast<std::size_t>(scope[k]);
      if (i >= num_vars)
        continue;
      auto& current = plan.source[i];
      const bool better = current == SIZE_MAX ||
                          scope.size() < support[current].size() ||
                          (scope.size() == support[current].size() && scope < support[current]);
      if (better) {
        current = t;
        plan.slot[i] = k;
      }
    }
  }
  for (std::size_t i = 0; i < num_vars; ++i)
    if (plan.source[i] == SIZE_MAX)
      throw InvalidSpec("variable " + std::to_string(i + 1) + " is not covered by any belief");
  return plan;
}

template <class TableOf>
Assignment decode_with(const DecodePlan& plan, std::span<const Cluster> support,
                       std::span<const int> cards, TableOf&& table_of)
{
  std::map<std::size_t, std::vector<int>> argmax;
  Assignment x;
  x.states.resize(plan.source.size());
  for (std::size_t i = 0; i < plan.source.size(); ++i) {
    const auto t = plan.source[i];
    auto it = argmax.find(t);
    if (it == argmax.end()) {
      const auto& table = table_of(t);
      it = argmax.emplace(t, config_states(support[t], cards, argmax_of(table))).first;
    }
    x.states[i] = it->second[plan.slot[i]];
  }
  return x;
}

}

std::size_t BeliefState::index(const Cluster& t) const
{
  auto it = positions.find(t);
  if (it == positions.end())
    throw InvalidSpec(t.to_string() + " is not in the support set");
  return it->second;
}

void BeliefState::add(const Cluster& t)
{
  if (contains(t))
    return;
  positions.emplace(t, support.size());
  support.push_back(t);
  tables.emplace_back(table_size(t, cardinalities), 0.0);
}

BeliefState init_beliefs(const FactorGraph& graph, const RelaxationSpec& spec)
{
  check_coverage(graph, spec);
  BeliefState b;
  b.cardinalities.assign(graph.cardinalities().begin(), graph.cardinalities().end());
  for (const auto& t : spec.support()) {
    b.positions.emplace(t, b.support.size());
    b.support.push_back(t);
    b.tables.push_back(theta_hat(graph, t));
  }
  return b;
}

MessageState init_messages(const FactorGraph& graph, const RelaxationSpec& spec)
{
  MessageState m;
  const auto extended = spec.extended_clusters();
  for (std::size_t i = 0; i < extended.size(); ++i)
    for (const auto& s : spec.sub_clusters(i))
      if (s != extended[i])
        m.tables.emplace(Edge{extended[i], s},
                         std::vector<double>(table_size(s, graph.cardinalities()), 0.0));
  return m;
}

void update_cluster_beliefs(BeliefState& beliefs, const Cluster& c,
                            std::span<const Cluster> sub_clusters)
{
  const auto subs = proper_subs(c, sub_clusters);
  if (subs.empty())
    return;
  auto& bc = beliefs.table(c);
  std::vector<std::vector<std::uint32_t>> maps;
  std::vector<std::vector<double>*> bs;
  for (const auto& s : subs) {
    maps.push_back(projection_map(c, s, beliefs.cardinalities));
    bs.push_back(&beliefs.table(s));
  }

  std::vector<double> tmp = bc;
  for (std::size_t j = 0; j < subs.size(); ++j)
    for (std::size_t x = 0; x < tmp.size(); ++x)
      tmp[x] += (*bs[j])[maps[j][x]];

  std::vector<const std::vector<std::uint32_t>*> map_ptrs;
  std::vector<std::vector<double>> mm;
  for (std::size_t j = 0; j < subs.size(); ++j) {
    map_ptrs.push_back(&maps[j]);
    mm.emplace_back(bs[j]->size());
  }
  max_marginals(tmp, map_ptrs, mm);

  const double n = static_cast<double>(subs.size());
  for (std::size_t j = 0; j < subs.size(); ++j)
    for (std::size_t y = 0; y < mm[j].size(); ++y)
      (*bs[j])[y] = mm[j][y] / n;
  for (std::size_t x = 0; x < tmp.size(); ++x) {
    double v = tmp[x];
    for (std::size_t j = 0; j < subs.size(); ++j)
      v -= (*bs[j])[maps[j][x]];
    bc[x] = v;
  }
}

namespace {

// λ_t: messages received by t, excluding those sent by `skip`.
std::vector<double> received(const MessageState& messages, const Cluster& t, std::size_t size,
                             const Cluster* skip)
{
  std::vector<double> out(size, 0.0);
  for (const auto& [e, table] : messages.tables) {
    if (e.to != t || (skip && e.from == *skip))
      continue;
    for (std::size_t x = 0; x < size; ++x)
      out[x] += table[x];
  }
  return out;
}

// γ_t: messages sent by t, expanded onto x_t.
std::vector<double> sent(const MessageState& messages, const Cluster& t, std::size_t size,
                         std::span<const int> cards)
{
  std::vector<double> out(size, 0.0);
  auto it = messages.tables.lower_bound(Edge{t, Cluster{}});
  for (; it != messages.tables.end() && it->first.from == t; ++it) {
    const auto map = projection_map(t, it->first.to, cards);
    for (std::size_t x = 0; x < size; ++x)
      out[x] += it->second[map[x]];
  }
  return out;
}

}

void update_cluster_messages(MessageState& messages, const FactorGraph& graph,
                             const RelaxationSpec& spec, const Cluster& c)
{
  if (!spec.is_extended(c))
    throw InvalidSpec(c.to_string() + " is not an extended cluster");
  const auto subs = proper_subs(c, spec.sub_clusters(c));
  if (subs.empty())
    return;
  const auto cards = graph.cardinalities();
  const auto size_c = table_size(c, cards);

  // B_s = θ̂_s − γ_s + λ_s^{−c}
  std::vector<std::vector<double>> B;
  std::vector<std::vector<std::uint32_t>> maps;
  for (const auto& s : subs) {
    const auto size_s = table_size(s, cards);
    auto b = theta_hat(graph, s);
    const auto gamma = sent(messages, s, size_s, cards);
    const auto others = received(messages, s, size_s, &c);
    for (std::size_t y = 0; y < size_s; ++y)
      b[y] += others[y] - gamma[y];
    B.push_back(std::move(b));
    maps.push_back(projection_map(c, s, cards));
  }

  // M = θ̂_c + λ_c + Σ B_ŝ
  auto M = theta_hat(graph, c);
  const auto lambda_c = received(messages, c, size_c, nullptr);
  for (std::size_t x = 0; x < size_c; ++x) {
    M[x] += lambda_c[x];
    for (std::size_t j = 0; j < subs.size(); ++j)
      M[x] += B[j][maps[j][x]];
  }

  std::vector<const std::vector<std::uint32_t>*> map_ptrs;
  std::vector<std::vector<double>> mm;
  for (std::size_t j = 0; j < subs.size(); ++j) {
    map_ptrs.push_back(&maps[j]);
    mm.emplace_back(B[j].size());
  }
  max_marginals(M, map_ptrs, mm);

  const double n = static_cast<double>(subs.size());
  for (std::size_t j = 0; j < subs.size(); ++j) {
    auto& lambda = messages.tables[Edge{c, subs[j]}];
    lambda.resize(B[j].size());
    for (std::size_t y = 0; y < lambda.size(); ++y)
      lambda[y] = mm[j][y] / n - B[j][y];
  }
}

BeliefState beliefs_from_messages(const FactorGraph& graph, const RelaxationSpec& spec,
                                  const MessageState& messages)
{
  auto b = init_beliefs(graph, spec);
  for (std::size_t t = 0; t < b.support.size(); ++t) {
    const auto& scope = b.support[t];
    auto& table = b.tables[t];
    const auto lambda = received(messages, scope, table.size(), nullptr);
    const auto gamma = sent(messages, scope, table.size(), b.cardinalities);
    for (std::size_t x = 0; x < table.size(); ++x)
      table[x] += lambda[x] - gamma[x];
  }
  return b;
}

double dual_objective(const BeliefState& beliefs)
{
  double g = 0.0;
  for (const auto& table : beliefs.tables)
    g += max_of(table);
  return g;
}

double dual_decrease(const BeliefState& beliefs, const Cluster& c,
                     std::span<const Cluster> sub_clusters)
{
  const auto subs = proper_subs(c, sub_clusters);
  const auto& bc = beliefs.table(c);
  double separate = max_of(bc);
  std::vector<double> tmp = bc;
  for (const auto& s : subs) {
    const auto& bs = beliefs.table(s);
    separate += max_of(bs);
    const auto map = projection_map(c, s, beliefs.cardinalities);
    for (std::size_t x = 0; x < tmp.size(); ++x)
      tmp[x] += bs[map[x]];
  }
  return separate - max_of(tmp);
}

Assignment decode(const BeliefState& beliefs, const FactorGraph& graph)
{
  const auto plan = plan_decoding(beliefs.support, graph.num_vars());
  return decode_with(plan, beliefs.support, beliefs.cardinalities,
                     [&](std::size_t t) -> const std::vector<double>& { return beliefs.tables[t]; });
}

std::vector<std::size_t> maximisers(std::span<const double> table, double tolerance)
{
  const double m = max_of(table);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] >= m - tolerance)
      out.push_back(i);
  return out;
}

MemoryReport memory_report(const FactorGraph& graph, const RelaxationSpec& spec)
{
  const auto cards = graph.cardinalities();
  MemoryReport r;
  for (const auto& t : spec.support())
    r.beliefs += table_size(t, cards);
  for (const auto& p : graph.potentials())
    r.potentials += p.values.size();
  const auto extended = spec.extended_clusters();
  for (std::size_t i = 0; i < extended.size(); ++i)
    for (const auto& s : spec.sub_clusters(i))
      if (s != extended[i])
        r.messages += table_size(s, cards);
  return r;
}

MemoryReport closed_form_memory(int states, std::span<const std::size_t> orders)
{
  const auto power = [](std::uint64_t base, std::size_t exp) {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < exp; ++i)
      v *= base;
    return v;
  };
  MemoryReport r;
  const auto k = static_cast<std::uint64_t>(states);
  for (auto order : orders) {
    r.beliefs += power(k, order);
    r.potentials += power(k, order);
    r.messages += power(k + 1, order) - 1 - power(k, order);
  }
  return r;
}

std::uint64_t work_per_sweep(const FactorGraph& graph, const RelaxationSpec& spec)
{
  const auto cards = graph.cardinalities();
  std::uint64_t total = 0;
  const auto extended = spec.extended_clusters();
  for (std::size_t i = 0; i < extended.size(); ++i) {
    const auto subs = proper_subs(extended[i], spec.sub_clusters(i));
    if (subs.empty())
      continue;
    total += table_size(extended[i], cards);
    for (const auto& s : subs)
      total += table_size(s, cards);
  }
  return total;
}

//
// GddSolver
//

struct GddSolver::Impl {
  struct Slot {
    std::size_t target;
    std::size_t message;
  };
  struct Block {
    std::size_t node;
    std::vector<Slot> slots;
  };

  const FactorGraph* graph;
  std::vector<int> cards;
  RelaxationSpec spec;
  Mode mode;

  std::vector<Cluster> support;
  std::map<Cluster, std::size_t> position;
  std::vector<std::vector<double>> theta;
  std::vector<Block> blocks;
  std::map<std::size_t, std::size_t> block_of;

  // one entry per edge (c → s), s ≠ c; maps project x_c onto x_s
  std::vector<std::size_t> msg_from;
  std::vector<std::size_t> msg_to;
  std::vector<std::vector<std::uint32_t>> msg_map;
  std::vector<std::vector<double>> messages;   // message mode only
  std::vector<std::vector<std::size_t>> incoming;
  std::vector<std::vector<std::size_t>> outgoing;

  std::vector<std::vector<double>> beliefs;    // belief mode only

  std::uint64_t writes = 0;
  UpdateObserver observer;
  mutable std::optional<DecodePlan> plan;

  // scratch
  std::vector<double> tmp;
  std::vector<std::vector<double>> mm;
  std::vector<std::vector<double>> base;
  std::vector<const std::vector<std::uint32_t>*> maps;

  std::size_t add_node(const Cluster& t)
  {
    auto [it, inserted] = position.emplace(t, support.size());
    if (!inserted)
      return it->second;
    support.push_back(t);
    if (mode == Mode::beliefs) {
      beliefs.push_back(theta_hat(*graph, t));
      theta.emplace_back();
    } else {
      theta.push_back(theta_hat(*graph, t));
    }
    incoming.emplace_back();
    outgoing.emplace_back();
    plan.reset();
    return it->second;
  }

  void add_block(const Cluster& c, std::span<const Cluster> subs)
  {
    const auto node = add_node(c);
    auto [at, fresh] = block_of.emplace(node, blocks.size());
    if (fresh)
      blocks.push_back(Block{node, {}});
    auto existing = blocks.begin() + static_cast<std::ptrdiff_t>(at->second);
    for (const auto& s : subs) {
      if (s == c)
        continue;
      if (!s.is_subset_of(c))
        throw InvalidSpec(s.to_string() + " is not a subset of " + c.to_string());
      const auto target = add_node(s);
      const bool present = std::any_of(existing->slots.begin(), existing->slots.end(),
                                       [&](const Slot& slot) { return slot.target == target; });
      if (present)
        continue;
      const auto id = msg_from.size();
      msg_from.push_back(node);
      msg_to.push_back(target);
      msg_map.push_back(projection_map(c, s, cards));
      if (mode == Mode::messages)
        messages.emplace_back(table_size(s, cards), 0.0);
      incoming[target].push_back(id);
      outgoing[node].push_back(id);
      existing->slots.push_back(Slot{target, id});
    }
  }

  // b_t = θ̂_t + λ_t − γ_t, optionally leaving out one received message.
  void reconstruct(std::size_t t, std::vector<double>& out, std::size_t skip = SIZE_MAX) const
  {
    out = theta[t];
    for (auto m : incoming[t]) {
      if (m == skip)
        continue;
      const auto& lambda = messages[m];
      for (std::size_t y = 0; y < out.size(); ++y)
        out[y] += lambda[y];
    }
    for (auto m : outgoing[t]) {
      const auto& lambda = messages[m];
      const auto& map = msg_map[m];
      for (std::size_t x = 0; x < out.size(); ++x)
        out[x] -= lambda[map[x]];
    }
  }

  double local_max_sum(const Block& block) const
  {
    if (mode == Mode::beliefs) {
      double v = max_of(beliefs[block.node]);
      for (const auto& slot : block.slots)
        v += max_of(beliefs[slot.target]);
      return v;
    }
    std::vector<double> table;
    reconstruct(block.node, table);
    double v = max_of(table);
    for (const auto& slot : block.slots) {
      reconstruct(slot.target, table);
      v += max_of(table);
    }
    return v;
  }

  void update_beliefs(const Block& block)
  {
    auto& bc = beliefs[block.node];
    const std::size_t n = block.slots.size();
    tmp = bc;
    maps.resize(n);
    mm.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& slot = block.slots[j];
      const auto& bs = beliefs[slot.target];
      const auto& map = msg_map[slot.message];
      for (std::size_t x = 0; x < tmp.size(); ++x)
        tmp[x] += bs[map[x]];
      maps[j] = &map;
      mm[j].resize(bs.size());
    }
    max_marginals(tmp, maps, mm);
    const double inv = static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      auto& bs = beliefs[block.slots[j].target];
      for (std::size_t y = 0; y < bs.size(); ++y)
        bs[y] = mm[j][y] / inv;
      writes += bs.size();
    }
    for (std::size_t x = 0; x < tmp.size(); ++x) {
      double v = tmp[x];
      for (std::size_t j = 0; j < n; ++j)
        v -= beliefs[block.slots[j].target][(*maps[j])[x]];
      bc[x] = v;
    }
    writes += bc.size();
  }

  void update_messages(const Block& block)
  {
    const std::size_t n = block.slots.size();
    base.resize(n);
    maps.resize(n);
    mm.resize(n);
    // B_s = θ̂_s − γ_s + λ_s^{−c}
    for (std::size_t j = 0; j < n; ++j) {
      const auto& slot = block.slots[j];
      reconstruct(slot.target, base[j], slot.message);
      maps[j] = &msg_map[slot.message];
      mm[j].resize(base[j].size());
    }
    // M = θ̂_c + λ_c + Σ B_ŝ
    tmp = theta[block.node];
    for (auto m : incoming[block.node]) {
      const auto& lambda = messages[m];
      for (std::size_t x = 0; x < tmp.size(); ++x)
        tmp[x] += lambda[x];
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto& map = *maps[j];
      for (std::size_t x = 0; x < tmp.size(); ++x)
        tmp[x] += base[j][map[x]];
    }
    max_marginals(tmp, maps, mm);
    const double inv = static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      auto& lambda = messages[block.slots[j].message];
      for (std::size_t y = 0; y < lambda.size(); ++y)
        lambda[y] = mm[j][y] / inv - base[j][y];
      writes += lambda.size();
    }
  }

  void update(std::size_t i)
  {
    const auto& block = blocks.at(i);
    if (block.slots.empty())
      return;
    const double before = observer ? local_max_sum(block) : 0.0;
    if (mode == Mode::beliefs)
      update_beliefs(block);
    else
      update_messages(block);
    if (observer)
      observer(i, before, local_max_sum(block));
  }

  double dual() const
  {
    double g = 0.0;
    if (mode == Mode::beliefs) {
      for (const auto& b : beliefs)
        g += max_of(b);
      return g;
    }
    std::vector<double> table;
    for (std::size_t t = 0; t < support.size(); ++t) {
      reconstruct(t, table);
      g += max_of(table);
    }
    return g;
  }
};

GddSolver::GddSolver(const FactorGraph& graph, RelaxationSpec spec, Mode mode)
: impl_(std::make_unique<Impl>())
{
  check_coverage(graph, spec);
  auto& s = *impl_;
  s.graph = &graph;
  s.cards.assign(graph.cardinalities().begin(), graph.cardinalities().end());
  s.mode = mode;
  // T in support order first so node indices follow spec.support()
  for (const auto& t : spec.support())
    s.add_node(t);
  const auto extended = spec.extended_clusters();
  for (std::size_t i = 0; i < extended.size(); ++i)
    s.add_block(extended[i], spec.sub_clusters(i));
  s.spec = std::move(spec);
}

GddSolver::~GddSolver() = default;
GddSolver::GddSolver(GddSolver&&) noexcept = default;
GddSolver& GddSolver::operator=(GddSolver&&) noexcept = default;

const RelaxationSpec& GddSolver::spec() const { return impl_->spec; }
Mode GddSolver::mode() const { return impl_->mode; }

void GddSolver::update(std::size_t i) { impl_->update(i); }

double GddSolver::sweep()
{
  for (std::size_t i = 0; i < impl_->blocks.size(); ++i)
    impl_->update(i);
  return impl_->dual();
}

double GddSolver::dual() const { return impl_->dual(); }

BeliefState GddSolver::beliefs() const
{
  const auto& s = *impl_;
  BeliefState b;
  b.cardinalities = s.cards;
  b.support = s.support;
  b.positions = s.position;
  if (s.mode == Mode::beliefs) {
    b.tables = s.beliefs;
  } else {
    b.tables.resize(s.support.size());
    for (std::size_t t = 0; t < s.support.size(); ++t)
      s.reconstruct(t, b.tables[t]);
  }
  return b;
}

Assignment GddSolver::decode() const
{
  const auto& s = *impl_;
  if (!s.plan)
    s.plan = plan_decoding(s.support, s.cards.size());
  if (s.mode == Mode::beliefs)
    return decode_with(*s.plan, s.support, s.cards,
                       [&](std::size_t t) -> const std::vector<double>& { return s.beliefs[t]; });
  std::map<std::size_t, std::vector<double>> cache;
  return decode_with(*s.plan, s.support, s.cards,
                     [&](std::size_t t) -> const std::vector<double>& {
                       auto& table = cache[t];
                       s.reconstruct(t, table);
                       return table;
                     });
}

void GddSolver::add_cluster(const Cluster& c, std::span<const Cluster> subs)
{
  auto& s = *impl_;
  for (const auto& sub : subs)
    if (sub != c && !s.position.contains(sub))
      throw InvalidSpec(sub.to_string() + " is not in the support set");
  s.spec.add(c, subs);
  s.add_block(c, subs);
}

std::uint64_t GddSolver::writes() const { return impl_->writes; }

void GddSolver::set_update_observer(UpdateObserver observer)
{
  impl_->observer = std::move(observer);
}

//
// Driver
//

double RunContext::elapsed() const
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void RunContext::record(const GddSolver& solver, const FactorGraph& graph, double dual)
{
  auto x = solver.decode();
  const double primal = energy(graph, x);
  if (primal > best_primal) {
    best_primal = primal;
    best_assignment = std::move(x);
  }
  double seconds = elapsed();
  if (!trace.records.empty())
    seconds = std::max(seconds, trace.records.back().seconds);
  trace.records.push_back(TraceRecord{sweeps, seconds, dual, best_primal, pursuit_round, label});
}

InnerLoopResult run_inner_loop(GddSolver& solver, const FactorGraph& graph, int max_sweeps,
                               double previous_dual, const SolverParams& params,
                               RunContext& context)
{
  InnerLoopResult r;
  r.dual = previous_dual;
  for (int k = 0; k < max_sweeps; ++k) {
    const double g = solver.sweep();
    ++context.sweeps;
    ++r.sweeps;
    context.record(solver, graph, g);
    const double change = std::abs(g - r.dual);
    r.dual = g;
    if (change < params.inner_tolerance) {
      r.converged = true;
      break;
    }
    if (context.elapsed() > params.time_limit) {
      r.timed_out = true;
      break;
    }
  }
  return r;
}

RunResult run(const FactorGraph& graph, const RelaxationSpec& spec, const SolverParams& params,
              Mode mode, const std::string& label)
{
  RunContext context;
  context.label = label;
  GddSolver solver(graph, spec, mode);
  const double g0 = solver.dual();
  context.record(solver, graph, g0);
  const auto loop = run_inner_loop(solver, graph, params.first_max_sweeps, g0, params, context);

  RunResult result;
  result.dual = loop.dual;
  result.sweeps = context.sweeps;
  result.converged = loop.converged;
  result.truncated = loop.timed_out;
  result.primal = context.best_primal;
  result.assignment = std::move(context.best_assignment);
  result.trace = std::move(context.trace);
  result.beliefs = solver.beliefs();
  return result;
}

}
