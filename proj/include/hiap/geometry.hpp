#pragma once

#include <span>
#include <vector>

#include "hiap/common.hpp"

namespace hiap {

/// N points in R^d with positive per-point weights (all 1 when unweighted).
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> coords;   // row-major, size() == n * dim
  std::vector<double> weights;  // size n

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, dim};
  }

  double total_weight() const;

  // Throws input_error on empty data, non-finite coordinates,
  // nonpositive weights, or a weight/point count mismatch.
  void validate() const;

  static Dataset from_points(std::size_t dim, std::vector<double> coords);
  static Dataset from_points(std::size_t dim, std::vector<double> coords,
                             std::vector<double> weights);
};

/// Dense n x n similarities; entry (i,i) holds the negated preference -s_i.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(Matrix values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.rows(); }
  double operator()(std::size_t i, std::size_t k) const {
    return values_(i, k);
  }
  double& operator()(std::size_t i, std::size_t k) { return values_(i, k); }
  const Matrix& values() const { return values_; }

  void validate() const;  // square, nonempty, all entries finite

 private:
  Matrix values_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

// Off-diagonal (i,k) = -|r_i - r_k|^2, diagonal uniformly -s. Weights are
// ignored here; weighted construction lives in wap.
SimilarityMatrix build_similarity(const Dataset& data, double preference);

}  // namespace hiap
