#include <cstdio>
#include <sstream>

#include "doctest.h"
#include "hiap/io.hpp"

using namespace hiap;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = std::string("/tmp/hiap_test_") + name;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("points csv round trip") {
  auto data = Dataset::from_points(2, {0.25, -1.5, 3.0, 4.0}, {1.0, 2.5});
  TempFile f("points.csv");
  write_points_csv(f.path, data, true);
  auto back = read_points_csv(f.path, true);
  CHECK(back.dim == 2);
  CHECK(back.coords == data.coords);
  CHECK(back.weights == data.weights);
}

TEST_CASE("header detection and plain rows") {
  std::istringstream with_header("x_1,x_2\n1.0,2.0\n3.0,4.0\n");
  auto a = read_points_csv(with_header, false);
  CHECK(a.size() == 2);
  CHECK(a.coords == std::vector<double>{1.0, 2.0, 3.0, 4.0});

  std::istringstream bare("1.0,2.0\n3.0,4.0\n");
  auto b = read_points_csv(bare, false);
  CHECK(b.coords == a.coords);

  std::istringstream weighted("1.0,2.0,3.0\n4.0,5.0,6.0\n");
  auto c = read_points_csv(weighted, true);
  CHECK(c.dim == 2);
  CHECK(c.weights == std::vector<double>{3.0, 6.0});

  std::istringstream ragged("1.0,2.0\n3.0\n");
  CHECK_THROWS_AS(read_points_csv(ragged, false), input_error);
  std::istringstream junk("1.0,2.0\n3.0,zebra\n");
  CHECK_THROWS_AS(read_points_csv(junk, false), input_error);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_points_csv(empty, false), input_error);
}

TEST_CASE("exemplar csv round trip") {
  std::vector<WeightedExemplar> pts(2);
  pts[0] = {{1.0, 2.0}, 3.0, 0.5, 0};
  pts[1] = {{-4.0, 0.125}, 1.0, 0.0, 1};
  TempFile f("exemplars.csv");
  write_exemplars_csv(f.path, {pts.data(), pts.size()}, 2);
  auto back = read_exemplars_csv(f.path, 2);
  REQUIRE(back.size() == 2);
  CHECK(back[0].position == pts[0].position);
  CHECK(back[0].weight == 3.0);
  CHECK(back[0].internal_distortion == 0.5);
  CHECK(back[1].position == pts[1].position);
}

TEST_CASE("missing file raises input error") {
  CHECK_THROWS_AS(read_points_csv("/tmp/hiap_does_not_exist.csv", false),
                  input_error);
  CHECK_THROWS_AS(read_text_file("/tmp/hiap_does_not_exist.txt"), input_error);
}

TEST_CASE("format_double is lossless") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}
