#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hiap/geometry.hpp"

namespace hiap {

/// Min-sum solver settings. A non-finite q selects hard-constraint AP;
/// a finite q is the SCAP per-violation charge.
struct SolverConfig {
  double q = std::numeric_limits<double>::infinity();
  double damping = 0.5;
  int max_iterations = 1000;
  int stability_window = 50;

  bool hard_constraint() const { return !std::isfinite(q); }
  void validate() const;
};

struct ClusteringResult {
  std::vector<std::size_t> assignment;  // c_i = exemplar index of point i
  std::vector<std::size_t> exemplars;   // sorted self-pointing indices
  double energy = 0.0;
  double distortion = 0.0;  // sum of -S(i, c_i) over non-self assignments
  int iterations_run = 0;
  bool converged = false;
};

// Damped synchronous min-sum message passing until the exemplar set is
// stable for cfg.stability_window iterations (or max_iterations). Non-self
// argmax targets are cleaned up by reassignment to the best self-pointing
// exemplar.
ClusteringResult solve(const SimilarityMatrix& sim, const SolverConfig& cfg);

// -sum_i S(i, c_i) plus the constraint cost: +inf (hard) or q per exemplar
// constraint violation (SCAP).
double energy(const SimilarityMatrix& sim,
              const std::vector<std::size_t>& assignment,
              double q = std::numeric_limits<double>::infinity());

// Exact minimizer by exhaustive enumeration, n <= 10 only. Ties broken by
// lexicographically smallest exemplar set.
ClusteringResult brute_force_minimize(
    const SimilarityMatrix& sim,
    double q = std::numeric_limits<double>::infinity());

}  // namespace hiap
