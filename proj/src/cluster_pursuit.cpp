#include "gdd/cluster_pursuit.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "gdd/errors.hpp"

namespace gdd {

double pursuit_score(const BeliefState& beliefs, const Cluster& merged,
                     const std::vector<Cluster>& sub_clusters)
{
  const auto cards = std::span<const int>(beliefs.cardinalities);
  std::vector<double> tmp(table_size(merged, cards), 0.0);
  double separate = 0.0;
  if (beliefs.contains(merged)) {
    const auto& bu = beliefs.table(merged);
    tmp = bu;
    separate += *std::max_element(bu.begin(), bu.end());
  }
  for (const auto& s : sub_clusters) {
    if (s == merged)
      continue;
    const auto& bs = beliefs.table(s);
    separate += *std::max_element(bs.begin(), bs.end());
    const auto map = projection_map(merged, s, cards);
    for (std::size_t x = 0; x < tmp.size(); ++x)
      tmp[x] += bs[map[x]];
  }
  return separate - *std::max_element(tmp.begin(), tmp.end());
}

CandidateScan stealth_candidates(const RelaxationSpec& spec, const BeliefState& beliefs,
                                 std::size_t max_union_order, bool require_disagreement)
{
  const auto extended = spec.extended_clusters();
  const auto cards = std::span<const int>(beliefs.cardinalities);

  // parents[t]: indices of ĉ ∈ C′ with t ∈ S(ĉ) ∖ {ĉ}
  std::map<Cluster, std::vector<std::size_t>> parents;
  for (std::size_t i = 0; i < extended.size(); ++i)
    for (const auto& s : spec.sub_clusters(i))
      if (s != extended[i])
        parents[s].push_back(i);

  const auto share_parent = [&](std::size_t a, std::size_t b) {
    auto pa = parents.find(extended[a]);
    auto pb = parents.find(extended[b]);
    if (pa == parents.end() || pb == parents.end())
      return false;
    for (auto x : pa->second)
      if (std::find(pb->second.begin(), pb->second.end(), x) != pb->second.end())
        return true;
    return false;
  };

  std::map<std::size_t, std::vector<std::size_t>> argmax_cache;
  const auto argmaxes = [&](std::size_t i) -> const std::vector<std::size_t>& {
    auto it = argmax_cache.find(i);
    if (it == argmax_cache.end())
      it = argmax_cache.emplace(i, maximisers(beliefs.table(extended[i]))).first;
    return it->second;
  };
  const auto projected = [&](std::size_t i, const Cluster& t) {
    const auto map = projection_map(extended[i], t, cards);
    std::set<std::uint32_t> out;
    for (auto x : argmaxes(i))
      out.insert(map[x]);
    return out;
  };

  CandidateScan scan;
  std::map<Cluster, StealthCandidate> best;
  std::set<Cluster> dropped;
  for (const auto& t : beliefs.support) {
    auto it = parents.find(t);
    if (it == parents.end() || it->second.size() < 2)
      continue;
    const auto& senders = it->second;
    for (std::size_t a = 0; a < senders.size(); ++a) {
      for (std::size_t b = a + 1; b < senders.size(); ++b) {
        const auto i = senders[a];
        const auto j = senders[b];
        if (share_parent(i, j))
          continue;
        if (require_disagreement) {
          const auto xi = projected(i, t);
          const auto xj = projected(j, t);
          const bool agree = std::any_of(xi.begin(), xi.end(),
                                         [&](std::uint32_t x) { return xj.contains(x); });
          if (agree)
            continue;
        }

        auto merged = cluster_union(extended[i], extended[j]);
        if (merged.size() > max_union_order) {
          dropped.insert(merged);
          continue;
        }
        std::vector<Cluster> subs;
        for (const auto& s : beliefs.support)
          if (s.is_proper_subset_of(merged))
            subs.push_back(s);
        std::sort(subs.begin(), subs.end(), LargerFirst{});

        StealthCandidate candidate{extended[i], extended[j], t, merged, std::move(subs), 0.0};
        candidate.score = pursuit_score(beliefs, candidate);
        auto [slot, inserted] = best.emplace(merged, candidate);
        if (!inserted && candidate.score > slot->second.score)
          slot->second = std::move(candidate);
      }
    }
  }

  for (auto& [u, c] : best)
    scan.candidates.push_back(std::move(c));
  std::stable_sort(scan.candidates.begin(), scan.candidates.end(),
                   [](const StealthCandidate& a, const StealthCandidate& b) {
                     if (a.score != b.score)
                       return a.score > b.score;
                     return a.merged < b.merged;
                   });
  for (const auto& u : dropped)
    scan.dropped.push_back(u.to_string());
  return scan;
}

std::string to_string(PursuitStop stop)
{
  switch (stop) {
    case PursuitStop::exact:       return "exact";
    case PursuitStop::time_limit:  return "time limit";
    case PursuitStop::round_limit: return "round limit";
    case PursuitStop::stalled:     return "stalled";
  }
  return "unknown";
}

PursuitResult run_with_pursuit(const FactorGraph& graph, const RelaxationSpec& spec,
                               const SolverParams& params, Mode mode, const std::string& label)
{
  RunContext context;
  context.label = label;
  GddSolver solver(graph, spec, mode);
  double g = solver.dual();
  context.record(solver, graph, g);

  PursuitResult result;
  // up to n candidates, skipping unions already in C′ with all their sub-clusters
  const auto pick = [&](const CandidateScan& scan) {
    for (const auto& u : scan.dropped)
      if (std::find(result.dropped.begin(), result.dropped.end(), u) == result.dropped.end())
        result.dropped.push_back(u);
    std::vector<StealthCandidate> useful;
    for (const auto& c : scan.candidates) {
      if (useful.size() >= static_cast<std::size_t>(params.clusters_per_pursuit))
        break;
      const auto current = solver.spec().sub_clusters(c.merged);
      const bool known = solver.spec().is_extended(c.merged) &&
                         std::all_of(c.sub_clusters.begin(), c.sub_clusters.end(),
                                     [&](const Cluster& s) {
                                       return std::find(current.begin(), current.end(), s) !=
                                              current.end();
                                     });
      if (!known)
        useful.push_back(c);
    }
    return useful;
  };

  for (int round = 1;; ++round) {
    const int k = round == 1 ? params.first_max_sweeps : params.later_max_sweeps;
    const auto loop = run_inner_loop(solver, graph, k, g, params, context);
    g = loop.dual;

    if (g - context.best_primal <= params.outer_tolerance) {
      result.stop = PursuitStop::exact;
      break;
    }
    if (loop.timed_out || context.elapsed() > params.time_limit) {
      result.stop = PursuitStop::time_limit;
      result.truncated = true;
      break;
    }
    if (params.max_pursuit_rounds >= 0 && result.rounds >= params.max_pursuit_rounds) {
      result.stop = PursuitStop::round_limit;
      break;
    }

    auto useful = pick(stealth_candidates(solver.spec(), solver.beliefs(),
                                          params.max_union_order));
    if (useful.empty() && params.dictionary_fallback && loop.converged)
      useful = pick(stealth_candidates(solver.spec(), solver.beliefs(), params.max_union_order,
                                       false));
    if (useful.empty()) {
      if (loop.converged) {
        result.stop = PursuitStop::stalled;
        break;
      }
      continue;
    }
    for (const auto& c : useful)
      solver.add_cluster(c.merged, c.sub_clusters);
    result.clusters_added += useful.size();
    ++result.rounds;
    context.pursuit_round = result.rounds;
  }

  result.dual = g;
  result.primal = context.best_primal;
  result.assignment = std::move(context.best_assignment);
  result.sweeps = context.sweeps;
  result.trace = std::move(context.trace);
  result.spec = solver.spec();
  result.beliefs = solver.beliefs();
  return result;
}

}
