#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "hiap/ap.hpp"
#include "hiap/geometry.hpp"
#include "hiap/synth.hpp"

namespace hiap {

// Weight-generalized distortion: sum_i w_i d^2(r_i, r_{c_i}).
double distortion(const Dataset& data, const ClusteringResult& result);

struct RadialHistogram {
  std::vector<double> bin_edges;  // strictly increasing, squared-distance units
  std::vector<std::size_t> counts;
  std::size_t total = 0;
};

// Equal-mass bin edges from pooled samples (default bin count 64).
std::vector<double> equal_mass_edges(std::vector<double> samples,
                                     std::size_t bins = 64);

RadialHistogram radial_histogram(const std::vector<double>& samples,
                                 const std::vector<double>& edges);

// Histogram of squared distances |r - origin|^2 with equal-mass edges.
RadialHistogram radial_distribution(
    const std::vector<std::vector<double>>& points,
    const std::vector<double>& origin, std::size_t bins = 64);

std::vector<double> squared_radii(const std::vector<std::vector<double>>& points,
                                  const std::vector<double>& origin);

struct WeibullFit {
  double alpha = 0.0;
  double half_dim = 0.0;  // fixed exponent d/2
  double ks_stat = 0.0;
};

// Maximum-likelihood rate for F(x) = 1 - exp(-alpha x^{d/2});
// closed form alpha = n / sum x_i^{d/2}.
WeibullFit fit_weibull(std::vector<double> samples, std::size_t d);

struct GammaRadialFit {
  double sigma = 0.0;
  double ks_stat = 0.0;
};

// Moment-matched sigma for the center-of-mass limit law
// F(x) = Gamma(d/2, dx/(2 sigma)) / Gamma(d/2).
GammaRadialFit fit_gamma_radial(std::vector<double> samples, std::size_t d);

double kl_divergence(const RadialHistogram& p, const RadialHistogram& q);

// Kolmogorov-Smirnov helpers.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);
double ks_p_value(double stat, double n_effective);
double ks_two_sample_p_value(const std::vector<double>& a,
                             const std::vector<double>& b);

// --- Single-cluster hierarchical exemplar process -------------------------
//
// A run of depth `stages` draws M^stages points from `shape` (variance 1,
// centered at the origin), groups them M at a time, keeps per group the
// sample nearest the group center of mass, and repeats on the survivors.
// Returns the squared distance of the final exemplar to the origin.
double hierarchical_exemplar_radius2(std::size_t dim, ClusterShape shape,
                                     std::size_t group_size, int stages,
                                     std::mt19937_64& rng);

// Repeated runs with per-repetition derived seeds; deterministic.
std::vector<double> exemplar_radii(std::size_t dim, ClusterShape shape,
                                   std::size_t group_size, int stages,
                                   std::size_t repetitions, std::uint64_t seed,
                                   int threads = 1);

// --- Finite-size recurrence Monte Carlo -----------------------------------

struct RecurrenceRow {
  int level = 0;
  double sigma_hat = 0.0;
  double sigma_err = 0.0;
  double omega_hat = 0.0;
  double omega_err = 0.0;
};

// Monte Carlo of the nearest-to-center-of-mass selection process: at each
// level draw M samples from the current empirical law (bootstrap over the
// previous level's pool) and keep the one nearest the center of mass.
// Batches give the mean +/- standard error per level. Requires d > 2.
std::vector<RecurrenceRow> recurrence_check(std::size_t dim, std::size_t M,
                                            int h_max, std::size_t repetitions,
                                            ClusterShape shape,
                                            std::uint64_t seed,
                                            std::size_t batches = 10,
                                            int threads = 1);

}  // namespace hiap
