#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hiap/ap.hpp"
#include "hiap/wap.hpp"

namespace hiap {

/// Partition plan: depth h, branching b = ceil((N/K)^{1/(h+1)}), leaf subset
/// size M = N / b^h, with the predicted cost K^{h/(h+1)} N^{(h+2)/(h+1)}.
struct HiApPlan {
  std::size_t n = 0;            // N
  std::size_t cap = 1;          // K, target exemplars per clustering
  int depth = 0;                // h
  std::size_t branching = 1;    // b
  std::size_t subset_size = 0;  // M
  double predicted_cost = 0.0;

  void validate() const;
};

HiApPlan plan(std::size_t n, std::size_t cap, int depth);

struct LevelReport {
  int level = 0;  // h at the leaves, 0 at the root
  std::size_t clusterings_run = 0;
  std::size_t points_in = 0;
  std::size_t exemplars_out = 0;
  double wall_time = 0.0;
  double operations_estimate = 0.0;  // sum of n^2 * iterations per run
};

struct HierarchyOptions {
  // Assign original points by following the exemplar chain (default) or by
  // re-assigning each point to its nearest top-level exemplar.
  bool nearest_reassignment = false;
  int threads = 1;
};

// Shuffle, split into b^h leaf subsets (sizes within +/-1), cluster each leaf
// with preference s_schedule[h], aggregate exemplars, recluster b sibling
// outputs with WAP at preference s_schedule[level], up to a single run at the
// root. h=0 runs plain AP on the full set with no shuffle. Deterministic for
// fixed (data order, seed, cfg) at any thread count.
std::pair<ClusteringResult, std::vector<LevelReport>> cluster_hierarchical(
    const Dataset& data, const HiApPlan& plan,
    const std::vector<double>& s_schedule, const SolverConfig& cfg,
    std::uint64_t seed, const HierarchyOptions& opts = {});

// Bisect the leaf preference on one pilot subset until the exemplar count
// drops to <= plan.cap. Returns the smallest such s found (log-scale search).
double find_leaf_preference(const Dataset& data, const HiApPlan& plan,
                            const SolverConfig& cfg, std::uint64_t seed);

}  // namespace hiap
