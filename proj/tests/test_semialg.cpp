#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "polyeb/errors.hpp"
#include "polyeb/semialg.hpp"

using namespace polyeb;
using fixtures::poly;

namespace {

// unit circle in y, independent of x
ParameterSetDescription circle() {
  ParameterSetDescription Y;
  Y.n = 1;
  Y.m = 2;
  Y.eqs = {poly(3, {{1, {0, 2, 0}}, {1, {0, 0, 2}}, {-1, {0, 0, 0}}})};
  Y.box = Box::cube(2, -1.5, 1.5);
  return Y;
}

}  // namespace

TEST_CASE("box basics") {
  const Box b({0, -1}, {2, 1});
  CHECK(b.dim() == 2);
  CHECK(b.diameter() == doctest::Approx(std::sqrt(8.0)));
  const std::vector<double> in{1, 0}, out{3, 0};
  CHECK(b.contains(in));
  CHECK_FALSE(b.contains(out));
  CHECK_THROWS_AS(Box({1}, {0}).validate("x_box"), ArgumentError);
}

TEST_CASE("membership respects equalities, inequalities and the box") {
  ParameterSetDescription Y = circle();
  Y.ineqs = {poly(3, {{-1, {0, 1, 0}}})};  // y1 ≥ 0
  const std::vector<double> x{0.3};
  const std::vector<double> on{1, 0}, off{0.5, 0}, neg{-1, 0};
  CHECK(membership(Y, x, on, 1e-8));
  CHECK_FALSE(membership(Y, x, off, 1e-8));
  CHECK_FALSE(membership(Y, x, neg, 1e-8));
  CHECK(Y.x_independent());
}

TEST_CASE("sampled points are members and sampling is deterministic") {
  const ParameterSetDescription Y = circle();
  const std::vector<double> x{0.0};
  const auto a = sample_parameter_set(Y, x, 64, 7);
  const auto b = sample_parameter_set(Y, x, 64, 7);
  REQUIRE_FALSE(a.empty());
  CHECK(a == b);
  for (const auto& y : a) CHECK(std::abs(y[0] * y[0] + y[1] * y[1] - 1) <= 1e-8);
}

TEST_CASE("restore_feasibility projects onto the circle") {
  const ParameterSetDescription Y = circle();
  const std::vector<double> x{0.0};
  std::vector<double> y{0.3, 0.4};
  const double res = restore_feasibility(Y, x, y);
  CHECK(res <= 1e-10);
  // Gauss–Newton from (0.3, 0.4) moves along the radial direction
  CHECK(y[0] / y[1] == doctest::Approx(0.75));
}

TEST_CASE("MFCQ on the circle and its failure at a cusp") {
  const ParameterSetDescription Y = circle();
  const std::vector<double> y{1, 0};
  CHECK(check_mfcq(Y, y).holds);

  // {y : y1² ≤ 0} has a vanishing gradient at the origin
  ParameterSetDescription Z;
  Z.n = 1;
  Z.m = 1;
  Z.ineqs = {poly(2, {{1, {0, 2}}})};
  Z.box = Box::cube(1, -1, 1);
  const std::vector<double> zero{0.0};
  CHECK_FALSE(check_mfcq(Z, zero).holds);
}

TEST_CASE("MMFCQ on the interval system") {
  const ParametricSystem sys = fixtures::gsip_interval_system();
  const std::vector<double> xbar{0.5};
  const std::vector<std::vector<double>> argmax{{1.0}};
  CHECK(check_mmfcq(sys, xbar, argmax).holds);
}

TEST_CASE("system validation names the offending field") {
  ParametricSystem sys = fixtures::square_system();
  sys.d = 1;  // f has degree 3
  try {
    sys.validate();
    FAIL("expected an ArgumentError");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("objectives") != std::string::npos);
  }
  ParametricSystem bad = fixtures::square_system();
  bad.objectives[0] = poly(3, {{1, {1, 0, 0}}});
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("solution set grid on the interval [-1, 1]") {
  const ParametricSystem sys = fixtures::gsip_interval_system();
  const SolutionSetGrid grid(sys, 401, 32, 0);
  REQUIRE_FALSE(grid.empty());
  CHECK(grid.spacing() == doctest::Approx(0.01));
  const std::vector<double> a{1.5}, b{-1.25}, c{0.2};
  CHECK(grid.distance(a) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(grid.distance(b) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(grid.distance(c) <= 1e-12);
}

TEST_CASE("grid helpers") {
  CHECK(grid_points_per_axis(10000, 2) == 100);
  const Box b = Box::cube(1, 0, 1);
  CHECK(grid_point(b, 11, 3)[0] == doctest::Approx(0.3));
  CHECK(grid_point(b, 1, 0)[0] == doctest::Approx(0.5));
}
