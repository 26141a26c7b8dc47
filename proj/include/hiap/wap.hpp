#pragma once

#include <span>
#include <vector>

#include "hiap/ap.hpp"
#include "hiap/geometry.hpp"

namespace hiap {

/// An aggregated point: position, represented mass, and the squared-distance
/// cost already absorbed by the aggregation.
struct WeightedExemplar {
  std::vector<double> position;
  double weight = 1.0;
  double internal_distortion = 0.0;
  std::size_t origin = 0;  // index of the represented point in the source set
};

std::vector<WeightedExemplar> to_weighted(const Dataset& data);

// Aggregation rules for the reduced point set: row entries scale with the
// emitting mass, S(i,k) = -w_i d^2(i,k) for i != k, and the diagonal absorbs
// the mass-scaled penalty plus accumulated distortion,
// S(c,c) = -(w_c s + delta_c). Setting include_internal_distortion=false
// drops the delta term (bare variant, for comparison).
SimilarityMatrix build_weighted_similarity(
    std::span<const WeightedExemplar> points, double preference,
    bool include_internal_distortion = true);

// Rescaled cost of an assignment: sum_i w_i d^2(i, c_i) / Z + n_clusters * s / V
// with Z the total mass.
double wap_energy(std::span<const WeightedExemplar> points,
                  const std::vector<std::size_t>& assignment, double preference,
                  double volume = 1.0);

// One WeightedExemplar per exemplar of `result`: mass is the summed member
// weight, internal distortion the summed w_i d^2(i, exemplar). The overload
// on weighted inputs carries forward the members' own absorbed distortion.
std::vector<WeightedExemplar> aggregate(const ClusteringResult& result,
                                        const Dataset& data);
std::vector<WeightedExemplar> aggregate(
    const ClusteringResult& result, std::span<const WeightedExemplar> points);

}  // namespace hiap
