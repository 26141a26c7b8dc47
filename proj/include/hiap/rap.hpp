#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hiap/ap.hpp"
#include "hiap/stats.hpp"
#include "hiap/synth.hpp"
#include "hiap/wap.hpp"

namespace hiap {

struct ShapeFactor {
  enum class Source { closed_form, empirical, default_unity };
  double omega = 1.0;
  Source source = Source::default_unity;

  static ShapeFactor unity() { return {1.0, Source::default_unity}; }
};

// Shape factor omega = sigma * alpha^{2/d} / Gamma(1 + 2/d) with
// alpha = p(0) * Omega_d / d, evaluated in closed form per shape.
ShapeFactor closed_form_shape_factor(ClusterShape shape, std::size_t d);

// Empirical omega: sigma from the mean squared distance to the sample
// center of mass, p(0) from a least-squares fit of the empirical radial CDF
// near the center of mass (F ~ alpha x^{d/2} (1 + beta x) over the
// ceil(M^0.6) nearest samples). Needs >= 50 points.
ShapeFactor estimate_shape_factor(const std::vector<std::vector<double>>& points);

// s^(lambda) = lambda^{2/d} / omega * s. Throws unless the rescaling factor
// is < 1; sets *weak_scaling when it exceeds 0.5 (the regime where the
// scaling argument degrades).
double rescale_penalty(double s, double lambda, std::size_t d,
                       const ShapeFactor& omega, bool* weak_scaling = nullptr);

// Asymptotic cluster-density prediction x(s) = (2 sigma / (d s))^{d/2},
// valid deep in the fragmentation regime.
std::vector<double> density_penalty_curve(double sigma, std::size_t d,
                                          const std::vector<double>& s_grid);

struct RapLevelRecord {
  int level = 0;
  double mean_clusters = 0.0;       // mean exemplars per clustering run
  std::size_t cluster_count = 0;    // rounded mean
  std::size_t pool_size = 0;        // exemplars pooled after this level
  double mean_error = -1.0;         // mean distance to nearest true center
  double count_variance = 0.0;      // across subsets at this level
  double penalty_used = 0.0;
};

struct RapScanConfig {
  std::vector<double> s_grid;  // increasing bare penalties
  int levels = 2;              // hierarchy depth h
  std::size_t subset_size = 300;
  ShapeFactor omega_first_level = ShapeFactor::unity();
  SolverConfig solver;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::vector<double>> true_centers;  // optional, for errors
};

struct RapScanResult {
  std::vector<double> s_grid;
  std::vector<std::vector<RapLevelRecord>> records;  // [s index][level]
  std::optional<double> detected_s_star;
  std::optional<std::size_t> detected_n_star;
  std::vector<std::string> diagnostics;
};

// Renormalized hierarchy scan over the penalty grid; the self-similar
// plateau (counts equal across levels and locally constant in s) locates
// s* and the underlying cluster count.
RapScanResult rap_scan(const Dataset& data, const RapScanConfig& cfg);

}  // namespace hiap
