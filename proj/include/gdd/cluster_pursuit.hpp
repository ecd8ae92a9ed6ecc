#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gdd/cluster.hpp"
#include "gdd/factor_graph.hpp"
#include "gdd/gdd_engine.hpp"
#include "gdd/relaxation.hpp"

namespace gdd {

// Union of two extended clusters that send to a common sub-cluster, have no
// common parent, and whose belief maximisers disagree on that sub-cluster.
struct StealthCandidate {
  Cluster first;
  Cluster second;
  Cluster shared;
  Cluster merged;
  std::vector<Cluster> sub_clusters;   // {s ∈ T : s ⊂ merged}, larger first
  double score = 0.0;
};

struct CandidateScan {
  std::vector<StealthCandidate> candidates;
  // unions skipped for exceeding the order cap, as "{...}" strings
  std::vector<std::string> dropped;
};

// All qualifying pairs, one candidate per union (the best-scoring pair wins,
// ties to the earlier scan), sorted by score descending then union.
// Maximiser sets use a 1e-9 tolerance. Without require_disagreement every
// pair meeting the two structural conditions qualifies.
CandidateScan stealth_candidates(const RelaxationSpec& spec, const BeliefState& beliefs,
                                 std::size_t max_union_order = 8,
                                 bool require_disagreement = true);

// Dual decrease from one update of the candidate's union:
//   max b_u + Σ_s max b_s − max_{x_u} [b_u + Σ_s b_s],
// with b_u taken as zero when the union is not yet in T (the usual case).
double pursuit_score(const BeliefState& beliefs, const Cluster& merged,
                     const std::vector<Cluster>& sub_clusters);
inline double pursuit_score(const BeliefState& beliefs, const StealthCandidate& candidate)
{
  return pursuit_score(beliefs, candidate.merged, candidate.sub_clusters);
}

enum class PursuitStop {
  exact,        // dual − primal ≤ T_a
  time_limit,
  round_limit,
  stalled,      // converged with no candidate left
};

struct PursuitResult {
  Assignment assignment;
  DualTrace trace;
  RelaxationSpec spec;
  BeliefState beliefs;
  double dual = 0.0;
  double primal = 0.0;
  int rounds = 0;               // pursuit rounds that added clusters
  std::size_t clusters_added = 0;
  long sweeps = 0;
  std::vector<std::string> dropped;   // unions skipped for the order cap
  PursuitStop stop = PursuitStop::stalled;
  bool truncated = false;       // stopped by the time limit
};

// Inner GDD loop (K1 sweeps the first time, K2 afterwards), then add the n
// best-scoring stealth unions; repeat until the gap closes or time runs out.
// When no pair disagrees and params.dictionary_fallback is set, the n best
// unions of the whole stealth dictionary are added instead.
PursuitResult run_with_pursuit(const FactorGraph& graph, const RelaxationSpec& spec,
                               const SolverParams& params, Mode mode,
                               const std::string& label = "");

std::string to_string(PursuitStop stop);

}
