#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "polyeb/errors.hpp"
#include "polyeb/flow.hpp"
#include "polyeb/rates.hpp"

using namespace polyeb;

TEST_CASE("log-log fit ignores non-positive pairs") {
  const std::vector<double> x{1, 2, 4, 0, 8}, y{3, 12, 48, 5, 192};
  const auto f = loglog_fit(x, y);
  CHECK(f.ok);
  CHECK(f.points == 4);
  CHECK(f.slope == doctest::Approx(2));
  CHECK(std::exp(f.intercept) == doctest::Approx(3));
}

TEST_CASE("power-law fit classification") {
  std::vector<double> k, poly, expo, finite;
  for (int i = 1; i <= 40; ++i) {
    k.push_back(i);
    poly.push_back(4.0 * std::pow(i, -0.75));
    expo.push_back(std::exp(-0.5 * i));
    finite.push_back(i < 25 ? 1.0 / i : 0.0);
  }
  const auto p = fit_power_law(k, poly);
  CHECK(p.exponent == doctest::Approx(0.75));
  CHECK(p.M == doctest::Approx(4.0));
  CHECK_FALSE(p.super_polynomial);
  CHECK(fit_power_law(k, expo).super_polynomial);
  CHECK(fit_power_law(k, finite).finite_time);
  const std::vector<double> two{1, 2};
  CHECK(fit_power_law(two, two).degenerate);
}

TEST_CASE("flow of x squared follows the exponential") {
  const ParametricSystem sys = fixtures::square_system();
  const std::vector<double> x0{0.8};
  const FlowRun run = integrate_flow(sys, x0, 1e-3, 0.5, 64, 0);
  REQUIRE(run.t.size() > 400);
  for (std::size_t k = 0; k < run.t.size(); k += 50) {
    // x' = −2x; explicit Euler error is O(step)
    CHECK(run.x[k][0] == doctest::Approx(0.8 * std::exp(-2 * run.t[k])).epsilon(2e-3));
    CHECK(run.phi[k] == doctest::Approx(run.x[k][0] * run.x[k][0]).epsilon(1e-9));
  }
  for (std::size_t k = 0; k + 1 < run.phi.size(); ++k) CHECK(run.phi[k + 1] <= run.phi[k] + 1e-8);
  for (std::size_t k = 0; k < run.energy_gap.size(); ++k) {
    if (run.smooth[k]) CHECK(run.energy_gap[k] >= -1e-6);
  }
  CHECK(std::abs(run.xbar[0]) < 1e-2);
}

TEST_CASE("flow of |x| reaches the kink in finite time") {
  const ParametricSystem sys = fixtures::abs_system();
  const std::vector<double> x0{0.5};
  const FlowRun run = integrate_flow(sys, x0, 1e-3, 1.0, 64, 0);
  CHECK(run.converged);
  CHECK(std::abs(run.x.back()[0]) <= 2e-3);
  // unit speed until the kink
  CHECK(run.t.back() == doctest::Approx(0.5).epsilon(0.01));
  const auto rep = verify_flow_rates(run, Rational(3, 4));
  CHECK(rep.distance.status == "degenerate-pass");
  CHECK(rep.pass);
}

TEST_CASE("flow arguments are checked") {
  const ParametricSystem sys = fixtures::square_system();
  const std::vector<double> x0{0.5}, bad{0.5, 0.5};
  CHECK_THROWS_AS(integrate_flow(sys, x0, -1e-3, 1.0, 64, 0), ArgumentError);
  CHECK_THROWS_AS(integrate_flow(sys, bad, 1e-3, 1.0, 64, 0), ArgumentError);
  const FlowRun run = integrate_flow(sys, x0, 1e-2, 0.2, 64, 0);
  CHECK_THROWS_AS(verify_flow_rates(run, Rational(1, 3)), ArgumentError);
}
