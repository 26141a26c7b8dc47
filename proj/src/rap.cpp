#include "hiap/rap.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>

namespace hiap {

ShapeFactor closed_form_shape_factor(ClusterShape shape, std::size_t dim) {
  if (dim < 1) throw input_error("dim must be >= 1");
  double d = static_cast<double>(dim);
  double log_omega = 0.0;
  switch (shape) {
    case ClusterShape::gaussian:
      log_omega = (2.0 - 2.0 / d) * std::log(d / 2.0) -
                  std::lgamma(2.0 / d) - (2.0 / d) * std::lgamma(d / 2.0);
      break;
    case ClusterShape::uniform_l2_ball:
      log_omega = std::log(d / (d + 2.0)) - std::lgamma(1.0 + 2.0 / d);
      break;
    case ClusterShape::uniform_l1_ball:
      log_omega = 2.0 * std::log(d) + (2.0 / d) * std::log(2.0) +
                  std::log(M_PI) + (2.0 / d) * std::lgamma(d) -
                  std::log(4.0 * (d + 1.0) * (d + 2.0)) -
                  std::lgamma(2.0 / d) - (2.0 / d) * std::lgamma(d / 2.0);
      break;
    case ClusterShape::weibull_radial:
      return {1.0, ShapeFactor::Source::closed_form};
  }
  return {std::exp(log_omega), ShapeFactor::Source::closed_form};
}

ShapeFactor estimate_shape_factor(
    const std::vector<std::vector<double>>& points) {
  if (points.size() < 50) throw input_error("need >= 50 points for estimation");
  std::size_t m = points.size();
  std::size_t dim = points.front().size();
  if (dim < 1) throw input_error("empty points");
  for (const auto& p : points)
    if (p.size() != dim) throw input_error("dimension mismatch");

  std::vector<double> cm(dim, 0.0);
  for (const auto& p : points)
    for (std::size_t k = 0; k < dim; ++k) cm[k] += p[k];
  for (double& x : cm) x /= static_cast<double>(m);

  std::span<const double> cms(cm.data(), dim);
  std::vector<double> r2(m);
  double sigma = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::span<const double> p(points[i].data(), dim);
    r2[i] = squared_distance(p, cms);
    sigma += r2[i];
  }
  sigma /= static_cast<double>(m);
  if (!(sigma > 0.0)) throw input_error("degenerate point set");

  std::size_t k = static_cast<std::size_t>(
      std::ceil(std::pow(static_cast<double>(m), 0.6)));
  k = std::min(k, m);
  std::partial_sort(r2.begin(), r2.begin() + k, r2.end());
  if (!(r2[k - 1] > 0.0)) throw input_error("degenerate point set");

  double d = static_cast<double>(dim);
  // Small-x law F(x) ~ alpha x^{d/2} (1 + beta x): least-squares fit of the
  // empirical CDF over the k nearest samples; the second term absorbs the
  // leading curvature bias of a plain k-NN density estimate.
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double y = (static_cast<double>(j) + 0.5) / static_cast<double>(m);
    double f1 = std::pow(r2[j], d / 2.0);
    double f2 = f1 * r2[j];
    s11 += f1 * f1;
    s12 += f1 * f2;
    s22 += f2 * f2;
    b1 += f1 * y;
    b2 += f2 * y;
  }
  double det = s11 * s22 - s12 * s12;
  double alpha = det > 0.0 ? (b1 * s22 - b2 * s12) / det : 0.0;
  if (!(alpha > 0.0)) alpha = b1 / s11;  // one-term fallback
  if (!(alpha > 0.0)) throw input_error("degenerate point set");
  double omega = sigma * std::pow(alpha, 2.0 / d) / std::tgamma(1.0 + 2.0 / d);
  return {omega, ShapeFactor::Source::empirical};
}

double rescale_penalty(double s, double lambda, std::size_t dim,
                       const ShapeFactor& omega, bool* weak_scaling) {
  if (!(s > 0.0)) throw input_error("penalty must be positive");
  if (!(lambda > 0.0) || lambda > 1.0)
    throw input_error("lambda must lie in (0, 1]");
  if (!(omega.omega > 0.0)) throw input_error("shape factor must be positive");
  double d = static_cast<double>(dim);
  double factor = std::pow(lambda, 2.0 / d) / omega.omega;
  if (!(factor < 1.0))
    throw input_error("rescaling factor must be < 1; subsample too large");
  if (weak_scaling) *weak_scaling = factor > 0.5;
  return factor * s;
}

std::vector<double> density_penalty_curve(double sigma, std::size_t dim,
                                          const std::vector<double>& s_grid) {
  if (!(sigma > 0.0)) throw input_error("sigma must be positive");
  double d = static_cast<double>(dim);
  std::vector<double> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    if (!(s > 0.0)) throw input_error("penalties must be positive");
    out.push_back(std::pow(2.0 * sigma / (d * s), d / 2.0));
  }
  return out;
}

namespace {

double nearest_center_error(
    const WeightedExemplar& e,
    const std::vector<std::vector<double>>& centers) {
  double best = std::numeric_limits<double>::infinity();
  std::span<const double> p(e.position.data(), e.position.size());
  for (const auto& c : centers) {
    std::span<const double> cs(c.data(), c.size());
    best = std::min(best, squared_distance(p, cs));
  }
  return std::sqrt(best);
}

}  // namespace

RapScanResult rap_scan(const Dataset& data, const RapScanConfig& cfg) {
  data.validate();
  if (cfg.s_grid.empty()) throw input_error("empty penalty grid");
  for (std::size_t i = 0; i < cfg.s_grid.size(); ++i) {
    if (!(cfg.s_grid[i] > 0.0)) throw input_error("penalties must be positive");
    if (i > 0 && !(cfg.s_grid[i] > cfg.s_grid[i - 1]))
      throw input_error("penalty grid must be strictly increasing");
  }
  if (cfg.levels < 1) throw input_error("levels must be >= 1");
  if (cfg.subset_size < 2) throw input_error("subset size must be >= 2");
  for (const auto& c : cfg.true_centers)
    if (c.size() != data.dim) throw input_error("true center dimension mismatch");

  std::size_t n = data.size();
  std::size_t dim = data.dim;

  // One shuffled order shared across the grid, so s is the only variable.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(derive_seed(cfg.seed, 0));
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<WeightedExemplar> base(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t src = order[i];
    auto p = data.point(src);
    base[i].position.assign(p.begin(), p.end());
    base[i].weight = data.weights[src];
    base[i].internal_distortion = 0.0;
    base[i].origin = src;
  }

  RapScanResult result;
  result.s_grid = cfg.s_grid;
  result.records.resize(cfg.s_grid.size());
  std::vector<std::string> diagnostics;
  std::mutex diag_mutex;

  parallel_for(cfg.s_grid.size(), cfg.threads, [&](std::size_t si) {
    double s = cfg.s_grid[si];
    std::vector<WeightedExemplar> pool = base;
    auto& levels = result.records[si];
    levels.resize(cfg.levels);
    std::vector<std::string> local_diag;

    // First level runs at the bare penalty; every transition rescales by
    // lambda_eff^{2/d} / omega with lambda_eff the per-run reduction ratio.
    double s_level = s;
    for (int level = 1; level <= cfg.levels; ++level) {
      std::size_t p = pool.size();
      std::size_t runs = (p + cfg.subset_size - 1) / cfg.subset_size;
      std::vector<WeightedExemplar> next;
      std::vector<double> run_counts(runs);

      for (std::size_t r = 0; r < runs; ++r) {
        std::size_t lo = r * p / runs;
        std::size_t hi = (r + 1) * p / runs;
        std::span<const WeightedExemplar> chunk(pool.data() + lo, hi - lo);
        SimilarityMatrix sim = build_weighted_similarity(chunk, s_level);
        ClusteringResult res = solve(sim, cfg.solver);
        auto agg = aggregate(res, chunk);
        run_counts[r] = static_cast<double>(agg.size());
        next.insert(next.end(), agg.begin(), agg.end());
      }

      auto& rec = levels[level - 1];
      rec.level = level;
      double mean = std::accumulate(run_counts.begin(), run_counts.end(), 0.0) /
                    static_cast<double>(runs);
      rec.mean_clusters = mean;
      rec.cluster_count = static_cast<std::size_t>(std::llround(mean));
      rec.pool_size = next.size();
      double var = 0.0;
      for (double c : run_counts) var += (c - mean) * (c - mean);
      rec.count_variance = runs > 1 ? var / static_cast<double>(runs - 1) : 0.0;
      rec.penalty_used = s_level;
      if (!cfg.true_centers.empty()) {
        double err = 0.0;
        for (const auto& e : next)
          err += nearest_center_error(e, cfg.true_centers);
        rec.mean_error = err / static_cast<double>(next.size());
      }

      if (level < cfg.levels) {
        ShapeFactor omega = level == 1 ? cfg.omega_first_level
                                       : ShapeFactor::unity();
        double points_per_run = static_cast<double>(p) / runs;
        double lambda_eff = mean / points_per_run;
        double factor = std::pow(lambda_eff, 2.0 / dim) / omega.omega;
        if (!(factor < 1.0))
          local_diag.push_back("rescaling factor >= 1 at s=" +
                               std::to_string(s) + " level " +
                               std::to_string(level));
        else if (factor > 0.5)
          local_diag.push_back("weak rescaling (factor > 0.5) at s=" +
                               std::to_string(s) + " level " +
                               std::to_string(level));
        s_level *= factor;
      }
      pool = std::move(next);
    }
    if (!local_diag.empty()) {
      std::lock_guard<std::mutex> lock(diag_mutex);
      diagnostics.insert(diagnostics.end(), local_diag.begin(),
                         local_diag.end());
    }
  });

  // Plateau: identical rounded counts across all levels, stable over at
  // least two adjacent grid points; the smallest such s wins.
  std::vector<std::size_t> level_count(cfg.s_grid.size(), 0);
  for (std::size_t si = 0; si < cfg.s_grid.size(); ++si) {
    const auto& levels = result.records[si];
    std::size_t c = levels.front().cluster_count;
    bool same = c > 0;
    for (const auto& rec : levels) same = same && rec.cluster_count == c;
    level_count[si] = same ? c : 0;
  }
  for (std::size_t si = 0; si + 1 < cfg.s_grid.size(); ++si) {
    if (level_count[si] > 0 && level_count[si] == level_count[si + 1]) {
      result.detected_s_star = cfg.s_grid[si];
      result.detected_n_star = level_count[si];
      break;
    }
  }
  if (!result.detected_s_star)
    diagnostics.push_back("no self-similar plateau found on the given grid");
  result.diagnostics = std::move(diagnostics);
  return result;
}

}  // namespace hiap
