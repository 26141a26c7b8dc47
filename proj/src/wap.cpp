#include "hiap/wap.hpp"

#include <cmath>
#include <set>

namespace hiap {

namespace {

std::span<const double> pos(const WeightedExemplar& e) {
  return {e.position.data(), e.position.size()};
}

void check_points(std::span<const WeightedExemplar> points) {
  if (points.empty()) throw input_error("no points");
  std::size_t dim = points.front().position.size();
  if (dim == 0) throw input_error("zero-dimensional point");
  for (const auto& p : points) {
    if (p.position.size() != dim)
      throw input_error("mixed dimensions in weighted point set");
    if (!(p.weight > 0.0) || !std::isfinite(p.weight))
      throw input_error("weights must be positive and finite");
    if (!(p.internal_distortion >= 0.0) ||
        !std::isfinite(p.internal_distortion))
      throw input_error("internal distortion must be nonnegative and finite");
    for (double x : p.position)
      if (!std::isfinite(x)) throw input_error("non-finite coordinate");
  }
}

}  // namespace

std::vector<WeightedExemplar> to_weighted(const Dataset& data) {
  data.validate();
  std::vector<WeightedExemplar> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto p = data.point(i);
    out.push_back({{p.begin(), p.end()}, data.weights[i], 0.0, i});
  }
  return out;
}

SimilarityMatrix build_weighted_similarity(
    std::span<const WeightedExemplar> points, double preference,
    bool include_internal_distortion) {
  check_points(points);
  if (!(preference > 0.0) || !std::isfinite(preference))
    throw input_error("preference must be positive and finite");
  std::size_t n = points.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) continue;
      double d2 = squared_distance(pos(points[i]), pos(points[k]));
      m(i, k) = -points[i].weight * d2;
    }
    double diag = points[i].weight * preference;
    if (include_internal_distortion) diag += points[i].internal_distortion;
    m(i, i) = -diag;
  }
  return SimilarityMatrix(std::move(m));
}

double wap_energy(std::span<const WeightedExemplar> points,
                  const std::vector<std::size_t>& assignment, double preference,
                  double volume) {
  check_points(points);
  if (!(volume > 0.0)) throw input_error("volume must be positive");
  if (assignment.size() != points.size())
    throw input_error("assignment length mismatch");
  double mass = 0.0;
  double dist = 0.0;
  std::set<std::size_t> clusters;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t c = assignment[i];
    if (c >= points.size()) throw input_error("assignment index out of range");
    clusters.insert(c);
    mass += points[i].weight;
    dist += points[i].weight * squared_distance(pos(points[i]), pos(points[c]));
  }
  return dist / mass +
         static_cast<double>(clusters.size()) * preference / volume;
}

std::vector<WeightedExemplar> aggregate(
    const ClusteringResult& result, std::span<const WeightedExemplar> points) {
  check_points(points);
  if (result.assignment.size() != points.size())
    throw input_error("clustering result does not match point set");
  std::vector<WeightedExemplar> out;
  out.reserve(result.exemplars.size());
  for (std::size_t mu : result.exemplars) {
    WeightedExemplar agg;
    agg.position = points[mu].position;
    agg.weight = 0.0;
    agg.internal_distortion = 0.0;
    agg.origin = points[mu].origin;
    out.push_back(std::move(agg));
  }
  // exemplar index -> slot
  std::vector<std::size_t> slot(points.size(), points.size());
  for (std::size_t k = 0; k < result.exemplars.size(); ++k)
    slot[result.exemplars[k]] = k;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t mu = result.assignment[i];
    if (slot[mu] == points.size())
      throw input_error("assignment targets a non-exemplar");
    WeightedExemplar& agg = out[slot[mu]];
    agg.weight += points[i].weight;
    agg.internal_distortion +=
        points[i].internal_distortion +
        points[i].weight * squared_distance(pos(points[i]), pos(points[mu]));
  }
  return out;
}

std::vector<WeightedExemplar> aggregate(const ClusteringResult& result,
                                        const Dataset& data) {
  auto pts = to_weighted(data);
  return aggregate(result, pts);
}

}  // namespace hiap
