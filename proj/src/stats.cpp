#include "hiap/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>

#include "hiap/rap.hpp"

namespace hiap {

double distortion(const Dataset& data, const ClusteringResult& result) {
  data.validate();
  if (result.assignment.size() != data.size())
    throw input_error("result does not match dataset");
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::size_t c = result.assignment[i];
    if (c >= data.size()) throw input_error("assignment index out of range");
    acc += data.weights[i] * squared_distance(data.point(i), data.point(c));
  }
  return acc;
}

std::vector<double> equal_mass_edges(std::vector<double> samples,
                                     std::size_t bins) {
  if (bins < 1) throw input_error("bins must be >= 1");
  if (samples.empty()) throw input_error("no samples");
  std::sort(samples.begin(), samples.end());
  std::vector<double> edges;
  edges.push_back(samples.front());
  for (std::size_t k = 1; k < bins; ++k) {
    std::size_t idx = k * samples.size() / bins;
    double e = samples[std::min(idx, samples.size() - 1)];
    if (e > edges.back()) edges.push_back(e);
  }
  double top = samples.back();
  // Half-open bins; nudge the last edge so the maximum lands inside.
  double pad = top == 0.0 ? 1e-300 : std::abs(top) * 1e-12;
  if (top + pad > edges.back()) edges.push_back(top + pad);
  if (edges.size() < 2) edges.push_back(edges.back() + 1e-300);
  return edges;
}

RadialHistogram radial_histogram(const std::vector<double>& samples,
                                 const std::vector<double>& edges) {
  if (edges.size() < 2) throw input_error("need at least two bin edges");
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (!(edges[k] > edges[k - 1]))
      throw input_error("bin edges must be strictly increasing");
  RadialHistogram h;
  h.bin_edges = edges;
  h.counts.assign(edges.size() - 1, 0);
  for (double x : samples) {
    if (x < edges.front() || x >= edges.back()) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    ++h.counts[bin];
    ++h.total;
  }
  return h;
}

std::vector<double> squared_radii(const std::vector<std::vector<double>>& points,
                                  const std::vector<double>& origin) {
  std::vector<double> out;
  out.reserve(points.size());
  std::span<const double> o(origin.data(), origin.size());
  for (const auto& p : points) {
    std::span<const double> q(p.data(), p.size());
    out.push_back(squared_distance(q, o));
  }
  return out;
}

RadialHistogram radial_distribution(
    const std::vector<std::vector<double>>& points,
    const std::vector<double>& origin, std::size_t bins) {
  if (points.empty()) throw input_error("no points");
  auto r2 = squared_radii(points, origin);
  auto edges = equal_mass_edges(r2, bins);
  return radial_histogram(r2, edges);
}

WeibullFit fit_weibull(std::vector<double> samples, std::size_t d) {
  if (samples.size() < 30) throw input_error("need >= 30 samples");
  double p = static_cast<double>(d) / 2.0;
  double acc = 0.0;
  for (double x : samples) {
    if (x < 0.0) throw input_error("negative squared distance");
    acc += std::pow(x, p);
  }
  if (acc == 0.0) throw input_error("degenerate fit: all samples zero");
  WeibullFit fit;
  fit.half_dim = p;
  fit.alpha = static_cast<double>(samples.size()) / acc;
  double alpha = fit.alpha;
  fit.ks_stat = ks_statistic(std::move(samples), [alpha, p](double x) {
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-alpha * std::pow(x, p));
  });
  return fit;
}

GammaRadialFit fit_gamma_radial(std::vector<double> samples, std::size_t d) {
  if (samples.size() < 30) throw input_error("need >= 30 samples");
  double mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                static_cast<double>(samples.size());
  if (!(mean > 0.0)) throw input_error("degenerate fit: all samples zero");
  GammaRadialFit fit;
  fit.sigma = mean;  // E[x] = sigma for Gamma(d/2, 2 sigma / d)
  double shape = static_cast<double>(d) / 2.0;
  double scale = 2.0 * mean / static_cast<double>(d);
  fit.ks_stat = ks_statistic(std::move(samples), [shape, scale](double x) {
    return x <= 0.0 ? 0.0 : boost::math::gamma_p(shape, x / scale);
  });
  return fit;
}

double kl_divergence(const RadialHistogram& p, const RadialHistogram& q) {
  if (p.bin_edges != q.bin_edges)
    throw input_error("histograms must share bin edges");
  if (p.total == 0 || q.total == 0) throw input_error("empty histogram");
  std::size_t bins = p.counts.size();
  double eps_p = 1.0 / static_cast<double>(p.total);
  double eps_q = 1.0 / static_cast<double>(q.total);
  double denom_p = static_cast<double>(p.total) + bins * eps_p;
  double denom_q = static_cast<double>(q.total) + bins * eps_q;
  double kl = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    double ph = (p.counts[k] + eps_p) / denom_p;
    double qh = (q.counts[k] + eps_q) / denom_q;
    kl += ph * std::log(ph / qh);
  }
  return std::max(kl, 0.0);
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw input_error("no samples");
  std::sort(samples.begin(), samples.end());
  double n = static_cast<double>(samples.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    stat = std::max({stat, std::abs(f - lo), std::abs(hi - f)});
  }
  return stat;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw input_error("empty sample set");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double stat = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    stat = std::max(stat, std::abs(static_cast<double>(i) / na -
                                   static_cast<double>(j) / nb));
  }
  return stat;
}

double ks_p_value(double stat, double n_effective) {
  double rn = std::sqrt(n_effective);
  double lambda = (rn + 0.12 + 0.11 / rn) * stat;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * lambda * lambda * k * k);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_two_sample_p_value(const std::vector<double>& a,
                             const std::vector<double>& b) {
  double stat = ks_statistic_two_sample(a, b);
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  return ks_p_value(stat, na * nb / (na + nb));
}

namespace {

struct SelNode {
  std::vector<double> position;
  double weight = 1.0;
};

// The idealized per-group selection: the sample nearest the (weighted)
// center of mass wins and absorbs the group mass.
SelNode select_node(const std::vector<SelNode>& group) {
  std::size_t dim = group.front().position.size();
  std::vector<double> cm(dim, 0.0);
  double mass = 0.0;
  for (const auto& g : group) {
    mass += g.weight;
    for (std::size_t k = 0; k < dim; ++k)
      cm[k] += g.weight * g.position[k];
  }
  for (double& x : cm) x /= mass;
  std::span<const double> cms(cm.data(), dim);

  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < group.size(); ++j) {
    std::span<const double> p(group[j].position.data(), dim);
    double d2 = squared_distance(p, cms);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return {group[best].position, mass};
}

std::vector<double> exemplar_position(std::size_t dim, ClusterShape shape,
                                      std::size_t group_size, int stages,
                                      std::mt19937_64& rng) {
  // A group of one is allowed: selection over a singleton is the raw draw.
  if (group_size < 1) throw input_error("group size must be >= 1");
  if (stages < 1) throw input_error("need at least one stage");
  std::size_t total = 1;
  for (int s = 0; s < stages; ++s) {
    if (total > 100000000 / group_size) throw size_error("run too large");
    total *= group_size;
  }
  std::vector<SelNode> nodes(total);
  for (auto& n : nodes) {
    n.position.resize(dim);
    sample_cluster_point(shape, dim, 1.0, rng, n.position.data());
  }
  while (nodes.size() > 1) {
    std::vector<SelNode> next;
    next.reserve(nodes.size() / group_size);
    for (std::size_t start = 0; start < nodes.size(); start += group_size) {
      std::size_t end = std::min(start + group_size, nodes.size());
      std::vector<SelNode> group(nodes.begin() + start, nodes.begin() + end);
      next.push_back(select_node(group));
    }
    nodes = std::move(next);
  }
  return std::move(nodes.front().position);
}

}  // namespace

double hierarchical_exemplar_radius2(std::size_t dim, ClusterShape shape,
                                     std::size_t group_size, int stages,
                                     std::mt19937_64& rng) {
  auto pos = exemplar_position(dim, shape, group_size, stages, rng);
  std::vector<double> origin(dim, 0.0);
  return squared_distance({pos.data(), dim}, {origin.data(), dim});
}

std::vector<double> exemplar_radii(std::size_t dim, ClusterShape shape,
                                   std::size_t group_size, int stages,
                                   std::size_t repetitions, std::uint64_t seed,
                                   int threads) {
  std::vector<double> out(repetitions);
  parallel_for(repetitions, threads, [&](std::size_t r) {
    std::mt19937_64 rng(derive_seed(seed, r));
    out[r] = hierarchical_exemplar_radius2(dim, shape, group_size, stages, rng);
  });
  return out;
}

std::vector<RecurrenceRow> recurrence_check(std::size_t dim, std::size_t M,
                                            int h_max, std::size_t repetitions,
                                            ClusterShape shape,
                                            std::uint64_t seed,
                                            std::size_t batches, int threads) {
  if (dim <= 2) throw input_error("recurrence check requires d > 2");
  if (M < 30) throw input_error("M must be >= 30");
  if (h_max < 1) throw input_error("h_max must be >= 1");
  if (batches < 2) throw input_error("need >= 2 batches");
  std::size_t per_batch = repetitions / batches;
  if (per_batch < 100) throw input_error("too few repetitions per batch");

  // per level, per batch: sigma and omega estimates
  std::vector<std::vector<double>> sig(h_max + 1,
                                       std::vector<double>(batches));
  std::vector<std::vector<double>> omg(h_max + 1,
                                       std::vector<double>(batches));

  // Each level-h pool holds independent depth-h runs (M^h fresh samples per
  // run), so pools never share draws and estimates stay unbiased.
  parallel_for(batches, threads, [&](std::size_t b) {
    std::mt19937_64 rng(derive_seed(seed, b));
    std::vector<double> origin(dim, 0.0);
    std::span<const double> o(origin.data(), dim);
    std::vector<std::vector<double>> pool(per_batch);

    for (int h = 0; h <= h_max; ++h) {
      for (auto& p : pool) {
        if (h == 0) {
          p.resize(dim);
          sample_cluster_point(shape, dim, 1.0, rng, p.data());
        } else {
          p = exemplar_position(dim, shape, M, h, rng);
        }
      }
      double s = 0.0;
      for (const auto& p : pool)
        s += squared_distance({p.data(), dim}, o);
      sig[h][b] = s / static_cast<double>(per_batch);
      omg[h][b] = estimate_shape_factor(pool).omega;
    }
  });

  std::vector<RecurrenceRow> rows(h_max + 1);
  for (int h = 0; h <= h_max; ++h) {
    rows[h].level = h;
    auto mean_err = [&](const std::vector<double>& v, double& mean,
                        double& err) {
      mean = std::accumulate(v.begin(), v.end(), 0.0) /
             static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      var /= static_cast<double>(v.size() - 1);
      err = std::sqrt(var / static_cast<double>(v.size()));
    };
    mean_err(sig[h], rows[h].sigma_hat, rows[h].sigma_err);
    mean_err(omg[h], rows[h].omega_hat, rows[h].omega_err);
  }
  return rows;
}

}  // namespace hiap
