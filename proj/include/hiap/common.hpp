#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hiap {

// Error taxonomy; the CLI maps these to distinct exit codes.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct size_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct generation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when message matrices go non-finite; carries the iteration index.
struct numeric_divergence_error : std::runtime_error {
  int iteration;
  explicit numeric_divergence_error(int iter)
      : std::runtime_error("non-finite messages at iteration " +
                           std::to_string(iter)),
        iteration(iter) {}
};

/// Minimal dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Counter-based stream split: subtask k of a run seeded with `seed` gets its
// own generator seed, independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Runs fn(i) for i in [0, count). Results keyed by i stay deterministic
// regardless of thread count; exceptions are rethrown on the caller thread.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

inline int default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace hiap
