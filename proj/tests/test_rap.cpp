#include <random>

#include "doctest.h"
#include "hiap/rap.hpp"

using namespace hiap;

TEST_CASE("closed-form shape factors") {
  struct Row {
    std::size_t d;
    double gauss, l2, l1;
  };
  // Independently evaluated from omega = sigma alpha^{2/d} / Gamma(1+2/d).
  const Row rows[] = {
      {2, 1.0, 0.5, 0.5235987755982988},
      {3, 1.3743643877035814, 0.6646393004594834, 0.7128354189804498},
      {5, 1.7428369300558315, 0.8050432128471624, 0.8847688715145273},
      {10, 2.090312662104612, 0.9076036842152805, 1.02032798727408},
  };
  for (const auto& r : rows) {
    CHECK(closed_form_shape_factor(ClusterShape::gaussian, r.d).omega ==
          doctest::Approx(r.gauss).epsilon(1e-12));
    CHECK(closed_form_shape_factor(ClusterShape::uniform_l2_ball, r.d).omega ==
          doctest::Approx(r.l2).epsilon(1e-12));
    CHECK(closed_form_shape_factor(ClusterShape::uniform_l1_ball, r.d).omega ==
          doctest::Approx(r.l1).epsilon(1e-12));
    CHECK(closed_form_shape_factor(ClusterShape::weibull_radial, r.d).omega ==
          1.0);
  }
  CHECK(closed_form_shape_factor(ClusterShape::gaussian, 2).source ==
        ShapeFactor::Source::closed_form);
}

TEST_CASE("empirical shape factor on gaussian data") {
  std::mt19937_64 rng(2024);
  std::size_t d = 3, m = 8000;
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> pts(m, std::vector<double>(d));
  for (auto& p : pts)
    for (auto& x : p) x = g(rng);
  auto est = estimate_shape_factor(pts);
  CHECK(est.source == ShapeFactor::Source::empirical);
  CHECK(est.omega ==
        doctest::Approx(closed_form_shape_factor(ClusterShape::gaussian, d).omega)
            .epsilon(0.15));
  // Scale invariance: omega is dimensionless.
  for (auto& p : pts)
    for (auto& x : p) x *= 7.0;
  auto scaled = estimate_shape_factor(pts);
  CHECK(scaled.omega == doctest::Approx(est.omega).epsilon(1e-9));

  CHECK_THROWS_AS(
      estimate_shape_factor(std::vector<std::vector<double>>(10)),
      input_error);
}

TEST_CASE("penalty rescaling") {
  ShapeFactor omega{2.0, ShapeFactor::Source::closed_form};
  bool weak = false;
  // lambda^{2/d} / omega with d=2, lambda=0.5: 0.25 * s.
  CHECK(rescale_penalty(8.0, 0.5, 2, omega, &weak) == doctest::Approx(2.0));
  CHECK_FALSE(weak);
  // Factor above 0.5 flags weak scaling.
  ShapeFactor soft{1.1, ShapeFactor::Source::closed_form};
  CHECK(rescale_penalty(8.0, 0.9, 2, soft, &weak) ==
        doctest::Approx(8.0 * 0.9 / 1.1));
  CHECK(weak);
  // Composition across two levels multiplies the factors.
  double once = rescale_penalty(8.0, 0.5, 2, omega);
  double twice = rescale_penalty(once, 0.5, 2, omega);
  CHECK(twice == doctest::Approx(8.0 * 0.25 * 0.25));

  CHECK_THROWS_AS(rescale_penalty(8.0, 2.0, 2, omega), input_error);
  CHECK_THROWS_AS(rescale_penalty(8.0, 1.0, 2, ShapeFactor::unity()),
                  input_error);
  CHECK_THROWS_AS(rescale_penalty(-1.0, 0.5, 2, omega), input_error);
}

TEST_CASE("density penalty curve") {
  // x(s) = (2 sigma / (d s))^{d/2}.
  auto xs = density_penalty_curve(3.0, 4, {1.0, 2.0});
  REQUIRE(xs.size() == 2);
  CHECK(xs[0] == doctest::Approx(std::pow(6.0 / 4.0, 2.0)));
  CHECK(xs[1] == doctest::Approx(std::pow(6.0 / 8.0, 2.0)));
  CHECK_THROWS_AS(density_penalty_curve(-1.0, 4, {1.0}), input_error);
  CHECK_THROWS_AS(density_penalty_curve(1.0, 4, {0.0}), input_error);
}

TEST_CASE("rap scan on an easy mixture") {
  MixtureSpec spec;
  spec.n_star = 3;
  spec.dim = 2;
  spec.centers = {{0.0, 0.0}, {20.0, 0.0}, {0.0, 20.0}};
  spec.variances = {1.0, 1.0, 1.0};
  spec.points_per_cluster = 200;
  auto [data, truth] = generate(spec, 9);

  RapScanConfig cfg;
  for (double s = 4.0; s < 400.0; s *= 1.6) cfg.s_grid.push_back(s);
  cfg.levels = 2;
  cfg.subset_size = 150;
  cfg.omega_first_level = closed_form_shape_factor(ClusterShape::gaussian, 2);
  cfg.seed = 5;
  cfg.true_centers = spec.centers;
  auto result = rap_scan(data, cfg);

  REQUIRE(result.detected_n_star.has_value());
  CHECK(*result.detected_n_star == 3);
  REQUIRE(result.detected_s_star.has_value());

  for (const auto& levels : result.records) {
    REQUIRE(levels.size() == 2);
    CHECK(levels[0].penalty_used > levels[1].penalty_used * 0.99);
    CHECK(levels[0].mean_error >= 0.0);
  }

  // Determinism, including under threading.
  auto again = rap_scan(data, cfg);
  CHECK(again.detected_s_star == result.detected_s_star);
  cfg.threads = 3;
  auto threaded = rap_scan(data, cfg);
  CHECK(threaded.detected_n_star == result.detected_n_star);
  for (std::size_t si = 0; si < result.records.size(); ++si)
    CHECK(threaded.records[si][1].cluster_count ==
          result.records[si][1].cluster_count);

  RapScanConfig bad = cfg;
  bad.s_grid = {2.0, 1.0};
  CHECK_THROWS_AS(rap_scan(data, bad), input_error);
}
