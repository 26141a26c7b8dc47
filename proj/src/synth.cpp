#include "hiap/synth.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

namespace hiap {

ClusterShape shape_from_string(const std::string& name) {
  if (name == "gaussian") return ClusterShape::gaussian;
  if (name == "l2" || name == "uniform-l2-ball") return ClusterShape::uniform_l2_ball;
  if (name == "l1" || name == "uniform-l1-ball") return ClusterShape::uniform_l1_ball;
  if (name == "weibull") return ClusterShape::weibull_radial;
  throw input_error("unknown cluster shape: " + name);
}

std::string to_string(ClusterShape shape) {
  switch (shape) {
    case ClusterShape::gaussian: return "gaussian";
    case ClusterShape::uniform_l2_ball: return "uniform-l2-ball";
    case ClusterShape::uniform_l1_ball: return "uniform-l1-ball";
    case ClusterShape::weibull_radial: return "weibull";
  }
  return "?";
}

void MixtureSpec::validate() const {
  if (n_star < 1) throw input_error("n_star must be >= 1");
  if (dim < 1) throw input_error("dim must be >= 1");
  if (centers.size() != n_star) throw input_error("centers count != n_star");
  if (variances.size() != n_star) throw input_error("variance count != n_star");
  if (points_per_cluster < 1)
    throw input_error("points_per_cluster must be >= 1");
  for (const auto& c : centers) {
    if (c.size() != dim) throw input_error("center dimension mismatch");
    for (double x : c)
      if (!std::isfinite(x)) throw input_error("non-finite center");
  }
  for (double v : variances)
    if (!(v > 0.0) || !std::isfinite(v))
      throw input_error("variances must be positive");
  for (std::size_t a = 0; a < centers.size(); ++a)
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      std::span<const double> ca(centers[a].data(), dim);
      std::span<const double> cb(centers[b].data(), dim);
      if (squared_distance(ca, cb) == 0.0)
        throw input_error("centers must be pairwise distinct");
    }
}

namespace {

double weibull_rate(std::size_t dim, double variance) {
  double d = static_cast<double>(dim);
  return std::pow(std::tgamma(1.0 + 2.0 / d) / variance, d / 2.0);
}

}  // namespace

void sample_cluster_point(ClusterShape shape, std::size_t dim, double variance,
                          std::mt19937_64& rng, double* out) {
  double d = static_cast<double>(dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (shape) {
    case ClusterShape::gaussian: {
      double sd = std::sqrt(variance / d);
      for (std::size_t k = 0; k < dim; ++k) out[k] = sd * normal(rng);
      return;
    }
    case ClusterShape::uniform_l2_ball: {
      double support = std::sqrt(variance * (d + 2.0) / d);
      double norm2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        out[k] = normal(rng);
        norm2 += out[k] * out[k];
      }
      double r = support * std::pow(unit(rng), 1.0 / d) / std::sqrt(norm2);
      for (std::size_t k = 0; k < dim; ++k) out[k] *= r;
      return;
    }
    case ClusterShape::uniform_l1_ball: {
      double support = std::sqrt(variance * (d + 1.0) * (d + 2.0) / (2.0 * d));
      std::exponential_distribution<double> expo(1.0);
      double sum = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        out[k] = expo(rng);
        sum += out[k];
      }
      double u = support * std::pow(unit(rng), 1.0 / d) / sum;
      for (std::size_t k = 0; k < dim; ++k) {
        double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        out[k] *= sign * u;
      }
      return;
    }
    case ClusterShape::weibull_radial: {
      double alpha = weibull_rate(dim, variance);
      double x = std::pow(-std::log1p(-unit(rng)) / alpha, 2.0 / d);
      double norm2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        out[k] = normal(rng);
        norm2 += out[k] * out[k];
      }
      double r = std::sqrt(x / norm2);
      for (std::size_t k = 0; k < dim; ++k) out[k] *= r;
      return;
    }
  }
}

double shape_radius(ClusterShape shape, std::size_t dim, double variance) {
  double d = static_cast<double>(dim);
  switch (shape) {
    case ClusterShape::gaussian: {
      boost::math::chi_squared chi2(d);
      return std::sqrt(boost::math::quantile(chi2, 0.95) * variance / d);
    }
    case ClusterShape::uniform_l2_ball:
      return std::sqrt(variance * (d + 2.0) / d);
    case ClusterShape::uniform_l1_ball:
      // The Euclidean support radius is attained on the axes.
      return std::sqrt(variance * (d + 1.0) * (d + 2.0) / (2.0 * d));
    case ClusterShape::weibull_radial: {
      double alpha = weibull_rate(dim, variance);
      return std::sqrt(std::pow(-std::log(0.05) / alpha, 2.0 / d));
    }
  }
  return 0.0;
}

std::pair<Dataset, GroundTruth> generate(const MixtureSpec& spec,
                                         std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::size_t n = spec.n_star * spec.points_per_cluster;
  std::vector<double> coords(n * spec.dim);
  GroundTruth truth;
  truth.labels.resize(n);
  std::vector<double> buf(spec.dim);
  std::size_t idx = 0;
  for (std::size_t c = 0; c < spec.n_star; ++c) {
    for (std::size_t m = 0; m < spec.points_per_cluster; ++m, ++idx) {
      sample_cluster_point(spec.shape, spec.dim, spec.variances[c], rng,
                           buf.data());
      for (std::size_t k = 0; k < spec.dim; ++k)
        coords[idx * spec.dim + k] = spec.centers[c][k] + buf[k];
      truth.labels[idx] = static_cast<int>(c);
    }
  }
  return {Dataset::from_points(spec.dim, std::move(coords)), std::move(truth)};
}

SeparabilityReport separability(const MixtureSpec& spec) {
  spec.validate();
  if (spec.n_star < 2)
    throw input_error("separability undefined for a single cluster");
  SeparabilityReport rep;
  rep.d_min = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < spec.n_star; ++a)
    for (std::size_t b = a + 1; b < spec.n_star; ++b) {
      std::span<const double> ca(spec.centers[a].data(), spec.dim);
      std::span<const double> cb(spec.centers[b].data(), spec.dim);
      rep.d_min = std::min(rep.d_min,
                           std::sqrt(squared_distance(ca, cb)));
    }
  rep.r_max = 0.0;
  for (double v : spec.variances)
    rep.r_max = std::max(rep.r_max, shape_radius(spec.shape, spec.dim, v));
  rep.eta = rep.d_min / (2.0 * rep.r_max);
  rep.well_separated = rep.eta > 1.0;
  return rep;
}

std::vector<std::vector<double>> place_centers(std::size_t n_star,
                                               std::size_t dim,
                                               double target_eta,
                                               std::uint64_t seed,
                                               double variance,
                                               ClusterShape shape) {
  if (n_star < 2) throw input_error("need at least two centers");
  if (!(target_eta > 0.0)) throw input_error("target eta must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double r_max = shape_radius(shape, dim, variance);

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<std::vector<double>> centers(n_star,
                                             std::vector<double>(dim));
    for (auto& c : centers)
      for (double& x : c) x = unit(rng);
    double d_min = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n_star; ++a)
      for (std::size_t b = a + 1; b < n_star; ++b) {
        std::span<const double> ca(centers[a].data(), dim);
        std::span<const double> cb(centers[b].data(), dim);
        d_min = std::min(d_min, std::sqrt(squared_distance(ca, cb)));
      }
    // Degenerate draws (nearly coincident centers) would need an extreme
    // blow-up factor; retry instead.
    if (d_min < 1e-3) continue;
    double scale = target_eta * 2.0 * r_max / d_min;
    for (auto& c : centers)
      for (double& x : c) x *= scale;
    return centers;
  }
  throw generation_error("center placement failed");
}

}  // namespace hiap
