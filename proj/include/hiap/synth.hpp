#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hiap/geometry.hpp"

namespace hiap {

enum class ClusterShape {
  gaussian,
  uniform_l2_ball,
  uniform_l1_ball,
  weibull_radial,  // the extreme-value law produced by exemplar selection
};

ClusterShape shape_from_string(const std::string& name);
std::string to_string(ClusterShape shape);

/// Mixture of localized clusters; `variances` are E[|r - center|^2] per
/// cluster (the full squared radius, not per coordinate).
struct MixtureSpec {
  std::size_t n_star = 1;
  std::size_t dim = 1;
  std::vector<std::vector<double>> centers;
  std::vector<double> variances;
  ClusterShape shape = ClusterShape::gaussian;
  std::size_t points_per_cluster = 100;

  void validate() const;
};

struct SeparabilityReport {
  double d_min = 0.0;
  double r_max = 0.0;
  double eta = 0.0;
  bool well_separated = false;
};

struct GroundTruth {
  std::vector<int> labels;  // generating cluster per point
};

std::pair<Dataset, GroundTruth> generate(const MixtureSpec& spec,
                                         std::uint64_t seed);

// d_min over center pairs; r_max is the 95%-mass radius for unbounded
// shapes and the support radius for the uniform balls.
SeparabilityReport separability(const MixtureSpec& spec);

double shape_radius(ClusterShape shape, std::size_t dim, double variance);

// Uniform centers in a cube, rescaled so the realized eta hits the target.
std::vector<std::vector<double>> place_centers(
    std::size_t n_star, std::size_t dim, double target_eta, std::uint64_t seed,
    double variance = 1.0, ClusterShape shape = ClusterShape::gaussian);

// Single draw from `shape` centered at the origin with E[|r|^2] = variance.
void sample_cluster_point(ClusterShape shape, std::size_t dim, double variance,
                          std::mt19937_64& rng, double* out);

}  // namespace hiap
