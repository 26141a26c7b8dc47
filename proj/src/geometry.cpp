#include "hiap/geometry.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>

namespace hiap {

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads < 1) threads = 1;
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<std::size_t>(threads, count);
  pool.reserve(n);
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double Dataset::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void Dataset::validate() const {
  if (dim == 0) throw input_error("dataset dimension must be >= 1");
  if (coords.empty()) throw input_error("dataset has no points");
  if (coords.size() % dim != 0)
    throw input_error("coordinate count is not a multiple of dim");
  if (weights.size() != size())
    throw input_error("weight count does not match point count");
  for (double x : coords)
    if (!std::isfinite(x)) throw input_error("non-finite coordinate");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw input_error("weights must be positive and finite");
}

Dataset Dataset::from_points(std::size_t dim, std::vector<double> coords) {
  Dataset d;
  d.dim = dim;
  d.coords = std::move(coords);
  d.weights.assign(dim == 0 ? 0 : d.coords.size() / dim, 1.0);
  d.validate();
  return d;
}

Dataset Dataset::from_points(std::size_t dim, std::vector<double> coords,
                             std::vector<double> weights) {
  Dataset d;
  d.dim = dim;
  d.coords = std::move(coords);
  d.weights = std::move(weights);
  d.validate();
  return d;
}

void SimilarityMatrix::validate() const {
  if (values_.rows() == 0) throw input_error("empty similarity matrix");
  if (values_.rows() != values_.cols())
    throw input_error("similarity matrix must be square");
  for (double v : values_.data())
    if (!std::isfinite(v)) throw input_error("non-finite similarity entry");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw input_error("squared_distance: dimension mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return acc;
}

SimilarityMatrix build_similarity(const Dataset& data, double preference) {
  data.validate();
  if (!(preference > 0.0) || !std::isfinite(preference))
    throw input_error("preference must be positive and finite");
  std::size_t n = data.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      double d2 = squared_distance(data.point(i), data.point(k));
      m(i, k) = -d2;
      m(k, i) = -d2;
    }
    m(i, i) = -preference;
  }
  return SimilarityMatrix(std::move(m));
}

}  // namespace hiap
