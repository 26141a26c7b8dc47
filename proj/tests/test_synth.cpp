#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hiap/synth.hpp"

using namespace hiap;

namespace {

double mean_squared_radius(ClusterShape shape, std::size_t dim,
                           double variance, std::size_t n,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> buf(dim);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sample_cluster_point(shape, dim, variance, rng, buf.data());
    double r2 = 0.0;
    for (double x : buf) r2 += x * x;
    acc += r2;
  }
  return acc / static_cast<double>(n);
}

}  // namespace

TEST_CASE("shape names round-trip") {
  for (auto shape : {ClusterShape::gaussian, ClusterShape::uniform_l2_ball,
                     ClusterShape::uniform_l1_ball,
                     ClusterShape::weibull_radial})
    CHECK(shape_from_string(to_string(shape)) == shape);
  CHECK_THROWS_AS(shape_from_string("triangle"), input_error);
}

TEST_CASE("samplers hit the requested variance") {
  for (auto shape : {ClusterShape::gaussian, ClusterShape::uniform_l2_ball,
                     ClusterShape::uniform_l1_ball,
                     ClusterShape::weibull_radial}) {
    for (std::size_t dim : {2u, 5u}) {
      double v = mean_squared_radius(shape, dim, 2.0, 40000, 99);
      CHECK(v == doctest::Approx(2.0).epsilon(0.05));
    }
  }
}

TEST_CASE("generate produces labeled mixture") {
  MixtureSpec spec;
  spec.n_star = 3;
  spec.dim = 2;
  spec.centers = {{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
  spec.variances = {0.5, 0.5, 0.5};
  spec.points_per_cluster = 50;
  auto [data, truth] = generate(spec, 4);
  CHECK(data.size() == 150);
  CHECK(data.dim == 2);
  REQUIRE(truth.labels.size() == 150);
  for (std::size_t i = 0; i < 150; ++i)
    CHECK(truth.labels[i] == static_cast<int>(i / 50));

  // Same seed reproduces byte-identical coordinates.
  auto [data2, truth2] = generate(spec, 4);
  CHECK(data.coords == data2.coords);
  auto [data3, truth3] = generate(spec, 5);
  CHECK(data.coords != data3.coords);

  // Points stay near their generating centers.
  for (std::size_t i = 0; i < 150; ++i) {
    auto p = data.point(i);
    const auto& c = spec.centers[truth.labels[i]];
    double r2 = 0.0;
    for (std::size_t k = 0; k < 2; ++k)
      r2 += (p[k] - c[k]) * (p[k] - c[k]);
    CHECK(r2 < 25.0);
  }
}

TEST_CASE("mixture spec validation") {
  MixtureSpec spec;
  spec.n_star = 2;
  spec.dim = 2;
  spec.centers = {{0.0, 0.0}};  // wrong count
  spec.variances = {1.0, 1.0};
  CHECK_THROWS_AS(spec.validate(), input_error);
  spec.centers = {{0.0, 0.0}, {1.0}};  // wrong dim
  CHECK_THROWS_AS(spec.validate(), input_error);
  spec.centers = {{0.0, 0.0}, {1.0, 1.0}};
  spec.variances = {1.0, -1.0};
  CHECK_THROWS_AS(spec.validate(), input_error);
}

TEST_CASE("separability report") {
  MixtureSpec spec;
  spec.n_star = 2;
  spec.dim = 2;
  spec.shape = ClusterShape::uniform_l2_ball;
  spec.centers = {{0.0, 0.0}, {8.0, 0.0}};
  spec.variances = {1.0, 1.0};
  auto rep = separability(spec);
  CHECK(rep.d_min == doctest::Approx(8.0));
  // L2 ball support radius sqrt(v (d+2)/d) = sqrt(2).
  CHECK(rep.r_max == doctest::Approx(std::sqrt(2.0)));
  CHECK(rep.eta == doctest::Approx(8.0 / (2.0 * std::sqrt(2.0))));
  CHECK(rep.well_separated);

  spec.centers = {{0.0, 0.0}, {1.0, 0.0}};
  auto rep2 = separability(spec);
  CHECK_FALSE(rep2.well_separated);
}

TEST_CASE("place_centers hits the separability target") {
  for (double target : {2.13, 0.85}) {
    auto centers = place_centers(10, 5, target, 11, 1.0,
                                 ClusterShape::gaussian);
    REQUIRE(centers.size() == 10);
    MixtureSpec spec;
    spec.n_star = 10;
    spec.dim = 5;
    spec.centers = centers;
    spec.variances.assign(10, 1.0);
    auto rep = separability(spec);
    CHECK(rep.eta == doctest::Approx(target).epsilon(1e-6));
  }
}
