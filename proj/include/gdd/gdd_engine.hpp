#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gdd/cluster.hpp"
#include "gdd/factor_graph.hpp"
#include "gdd/polytope_diagram.hpp"
#include "gdd/relaxation.hpp"

namespace gdd {

// b_t(x_t) for every t ∈ T, tables laid out as PotentialTable values.
struct BeliefState {
  std::vector<int> cardinalities;
  std::vector<Cluster> support;
  std::vector<std::vector<double>> tables;
  std::map<Cluster, std::size_t> positions;

  bool contains(const Cluster& t) const { return positions.contains(t); }
  // Throws InvalidSpec when t ∉ T.
  std::size_t index(const Cluster& t) const;
  std::vector<double>& table(const Cluster& t) { return tables[index(t)]; }
  const std::vector<double>& table(const Cluster& t) const { return tables[index(t)]; }
  // Appends a zero table for t (no-op when present).
  void add(const Cluster& t);
};

// λ_{c→s}(x_s) for every spec edge with s ≠ c.
struct MessageState {
  std::map<Edge, std::vector<double>> tables;
};

enum class Mode { beliefs, messages };

struct SolverParams {
  double inner_tolerance = 1e-8;   // T_g
  double outer_tolerance = 1e-6;   // T_a
  int first_max_sweeps = 1000;     // K1
  int later_max_sweeps = 20;       // K2
  int clusters_per_pursuit = 20;   // n
  double time_limit = 3600.0;      // seconds
  std::size_t max_union_order = 8;
  int max_pursuit_rounds = -1;     // negative: unbounded
  bool dictionary_fallback = true;
};

struct TraceRecord {
  long sweep = 0;
  double seconds = 0.0;
  double dual = 0.0;
  double primal = 0.0;
  int pursuit_round = 0;
  std::string algorithm;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct DualTrace {
  std::vector<TraceRecord> records;
};

// Zero tables for t ∉ C, θ_t for t ∈ C. Throws InvalidSpec when the spec does
// not cover C.
BeliefState init_beliefs(const FactorGraph& graph, const RelaxationSpec& spec);

// Zero message for every edge (c → s), s ≠ c.
MessageState init_messages(const FactorGraph& graph, const RelaxationSpec& spec);

// Message-free block update of b_c and b_s, s ∈ sub_clusters ∖ {c}:
//   b*_s = max_{x_{c∖s}} [b_c + Σ b_ŝ] / n,   b*_c = b_c + Σ b_ŝ − Σ b*_ŝ.
// No-op when sub_clusters ∖ {c} is empty. Throws InvalidSpec for an unknown
// cluster or a sub-cluster that is not a subset of c.
void update_cluster_beliefs(BeliefState& beliefs, const Cluster& c,
                            std::span<const Cluster> sub_clusters);

// Closed-form block update of λ_{c→s}, s ∈ S(c) ∖ {c}. Aggregates γ, λ_c and
// λ_s^{−c} are recomputed from `messages`.
void update_cluster_messages(MessageState& messages, const FactorGraph& graph,
                             const RelaxationSpec& spec, const Cluster& c);

// b_t = θ̂_t + λ_t − γ_t.
BeliefState beliefs_from_messages(const FactorGraph& graph, const RelaxationSpec& spec,
                                  const MessageState& messages);

// Σ_t max b_t; 0 for an empty support.
double dual_objective(const BeliefState& beliefs);

// max b_c + Σ max b_s − max_x [b_c + Σ b_s] over s ∈ sub_clusters ∖ {c}.
double dual_decrease(const BeliefState& beliefs, const Cluster& c,
                     std::span<const Cluster> sub_clusters);

// Per-variable argmax of b_{i} when {i} ∈ T, otherwise the state in the
// argmax of the smallest t ∋ i (then lexicographically smallest t). Lowest
// configuration index wins ties. Throws InvalidSpec for uncovered variables.
Assignment decode(const BeliefState& beliefs, const FactorGraph& graph);

// Configuration indices within `tolerance` of the table maximum.
std::vector<std::size_t> maximisers(std::span<const double> table, double tolerance = 1e-9);

struct MemoryReport {
  std::uint64_t beliefs = 0;
  std::uint64_t potentials = 0;
  std::uint64_t messages = 0;
};

// Table entries held by each scheme: beliefs over T, potentials over C, and
// messages over every edge (c → s), c ∈ C′, s ≠ c.
MemoryReport memory_report(const FactorGraph& graph, const RelaxationSpec& spec);

// The T = C, S(t) = {all proper subsets} form, clusters of the given orders
// with k states each: beliefs Σ k^|t|, potentials + messages Σ ((1+k)^|t| − 1).
// The split reports potentials Σ k^|t| and messages as the remainder.
MemoryReport closed_form_memory(int states, std::span<const std::size_t> orders);

// Belief-table scalars written by one sweep of message-free updates:
// Σ_{c ∈ C′, n(c) > 0} (|b_c| + Σ_s |b_s|).
std::uint64_t work_per_sweep(const FactorGraph& graph, const RelaxationSpec& spec);

// Coordinate-descent state for one relaxation. Keeps either belief tables
// (message-free mode) or message tables (message mode).
class GddSolver {
public:
  GddSolver(const FactorGraph& graph, RelaxationSpec spec, Mode mode);
  ~GddSolver();
  GddSolver(GddSolver&&) noexcept;
  GddSolver& operator=(GddSolver&&) noexcept;

  const RelaxationSpec& spec() const;
  Mode mode() const;

  // Block update of the i-th extended cluster.
  void update(std::size_t i);
  // One pass over C′ in insertion order; returns the dual afterwards.
  double sweep();

  double dual() const;
  BeliefState beliefs() const;
  Assignment decode() const;

  // Adds c to C′ with sub-clusters subs (all of which must already be in T).
  // New messages start at zero, a new b_c at zero; existing state is kept.
  void add_cluster(const Cluster& c, std::span<const Cluster> subs);

  // Belief scalars written so far by updates.
  std::uint64_t writes() const;

  // Called after each block update with the summed maxima of the touched
  // tables before and after; their difference is the change of the dual.
  using UpdateObserver = std::function<void(std::size_t cluster, double before, double after)>;
  void set_update_observer(UpdateObserver observer);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RunResult {
  DualTrace trace;
  BeliefState beliefs;
  Assignment assignment;
  double dual = 0.0;
  double primal = 0.0;
  long sweeps = 0;
  bool converged = false;
  bool truncated = false;
};

// Trace bookkeeping shared by consecutive inner loops of one run.
struct RunContext {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::string label;
  int pursuit_round = 0;
  long sweeps = 0;
  double best_primal = -std::numeric_limits<double>::infinity();
  Assignment best_assignment;
  DualTrace trace;

  double elapsed() const;
  // Decodes, updates the best primal and appends a record.
  void record(const GddSolver& solver, const FactorGraph& graph, double dual);
};

struct InnerLoopResult {
  double dual = 0.0;
  long sweeps = 0;
  bool converged = false;
  bool timed_out = false;
};

// Up to max_sweeps sweeps, stopping when the dual moves by less than T_g or
// the time limit passes. `previous_dual` is the dual before the first sweep.
InnerLoopResult run_inner_loop(GddSolver& solver, const FactorGraph& graph, int max_sweeps,
                               double previous_dual, const SolverParams& params,
                               RunContext& context);

// Sweeps until |g^k − g^{k−1}| < T_g or K1 sweeps. The trace holds a sweep-0
// record at initialisation and one per sweep; primal is the best decoded
// energy so far, and `assignment` the assignment attaining it.
RunResult run(const FactorGraph& graph, const RelaxationSpec& spec, const SolverParams& params,
              Mode mode, const std::string& label = "");

}
