#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "polyeb/errors.hpp"
#include "polyeb/linalg.hpp"
#include "polyeb/matrix_polynomial.hpp"
#include "polyeb/min_norm.hpp"
#include "polyeb/polynomial.hpp"
#include "polyeb/symmetric_eigen.hpp"

using namespace polyeb;
using fixtures::poly;

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-3/2") == Rational(-3, 2));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("-2.5E2") == -250);
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), ArgumentError);
  CHECK_THROWS_AS(parse_rational("abc"), ArgumentError);
  CHECK_THROWS_AS(parse_rational(""), ArgumentError);
  CHECK(to_string(Rational(-6, 4) + 0) == "-3/2");
  CHECK(to_scientific(BigInt(2916)) == "2.916e3");
}

TEST_CASE("exact and best rational conversions") {
  CHECK(exact_rational(0.375) == Rational(3, 8));
  CHECK(best_rational_approximation(0.333333333333, 100) == Rational(1, 3));
  CHECK(best_rational_approximation(-2.5, 10) == Rational(-5, 2));
  const Rational pi = best_rational_approximation(M_PI, 1000);
  CHECK(pi == Rational(355, 113));
}

TEST_CASE("polynomial arithmetic matches hand expansion") {
  const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  const Polynomial p = (x + y) * (x - y);
  CHECK(p == poly(2, {{1, {2, 0}}, {-1, {0, 2}}}));
  CHECK(p.degree() == 2);
  CHECK((p - p).is_zero());
  CHECK(x.pow(3) == poly(2, {{1, {3, 0}}}));
  const std::vector<std::size_t> only_y{1};
  CHECK(poly(2, {{1, {2, 3}}}).degree_in(only_y) == 3);
  CHECK_THROWS_AS(x + Polynomial::variable(3, 0), ArgumentError);
}

TEST_CASE("double evaluation agrees with exact evaluation") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  for (int i = 0; i < 50; ++i) {
    const Polynomial p = fixtures::random_polynomial(rng, 3, 5, 8);
    std::vector<Rational> xr;
    std::vector<double> xd;
    for (int j = 0; j < 3; ++j) {
      Rational v(num(rng), den(rng));
      v.canonicalize();
      xr.push_back(v);
      xd.push_back(v.get_d());
    }
    const double exact = p.eval_exact(xr).get_d();
    CHECK(p.eval(xd) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("partials of a monomial") {
  const Polynomial p = poly(3, {{Rational(5, 2), {3, 1, 0}}, {7, {0, 0, 2}}});
  CHECK(p.partial(0) == poly(3, {{Rational(15, 2), {2, 1, 0}}}));
  CHECK(p.partial(1) == poly(3, {{Rational(5, 2), {3, 0, 0}}}));
  CHECK(p.partial(2) == poly(3, {{14, {0, 0, 1}}}));
  const auto h = p.hessian();
  REQUIRE(h.size() == 9);
  CHECK(h[0 * 3 + 1] == h[1 * 3 + 0]);
  CHECK(h[2 * 3 + 2] == Polynomial::constant(3, 14));
}

TEST_CASE("gradient agrees with central differences") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 30; ++i) {
    const Polynomial p = fixtures::random_polynomial(rng, 2, 4, 5);
    const auto g = p.gradient();
    const std::vector<double> x{u(rng), u(rng)};
    for (std::size_t j = 0; j < 2; ++j) {
      auto a = x, b = x;
      a[j] += 1e-5;
      b[j] -= 1e-5;
      CHECK(g[j].eval(x) == doctest::Approx((p.eval(a) - p.eval(b)) / 2e-5).epsilon(1e-6));
    }
  }
}

TEST_CASE("embed and compose") {
  const Polynomial p = poly(2, {{1, {1, 2}}});  // x y²
  const std::vector<std::size_t> map{2, 0};
  const Polynomial e = p.embed(3, map);  // x3 x1²
  CHECK(e == poly(3, {{1, {2, 0, 1}}}));
  CHECK(p.depends_on(1));
  CHECK_FALSE(e.depends_on(1));
  const Polynomial t = Polynomial::variable(1, 0);
  const std::vector<Polynomial> images{t + Polynomial::constant(1, 1), t};
  CHECK(p.compose(images) == poly(1, {{1, {3}}, {1, {2}}}));
}

TEST_CASE("Jacobi eigenpairs against Eigen") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int m = 1; m <= 12; ++m) {
    Eigen::MatrixXd a(m, m);
    for (int r = 0; r < m; ++r) {
      for (int c = r; c < m; ++c) a(r, c) = a(c, r) = u(rng);
    }
    const auto ed = jacobi_eigen(SymmetricMatrix(a));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    for (int k = 0; k < m; ++k) {
      CHECK(ed.values(k) == doctest::Approx(ref.eigenvalues()(m - 1 - k)).epsilon(1e-10));
      CHECK((a * ed.vectors.col(k) - ed.values(k) * ed.vectors.col(k)).norm() < 1e-11);
    }
    CHECK((ed.vectors.transpose() * ed.vectors - Eigen::MatrixXd::Identity(m, m)).norm() < 1e-12);
  }
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2.0000001, 1;
  CHECK_THROWS_AS(SymmetricMatrix{bad}, ArgumentError);
}

TEST_CASE("lambda_max of a diagonal matrix") {
  Eigen::MatrixXd a = Eigen::Vector3d(1, 5, -2).asDiagonal();
  const auto [lm, v] = lambda_max(SymmetricMatrix(a));
  CHECK(lm == doctest::Approx(5));
  CHECK(std::abs(v(1)) == doctest::Approx(1));
}

TEST_CASE("singular values and least squares against Eigen") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  Mat a(5, 3);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) a(i, j) = u(rng);
  }
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec s = singular_values(a);
  for (int i = 0; i < 3; ++i) CHECK(s(i) == doctest::Approx(svd.singularValues()(i)).epsilon(1e-12));
  Vec b(5);
  for (int i = 0; i < 5; ++i) b(i) = u(rng);
  const Vec x = lstsq(a, b);
  const Vec ref = a.colPivHouseholderQr().solve(b);
  CHECK((x - ref).norm() < 1e-10);
  Mat rank1(3, 2);
  rank1 << 1, 2, 2, 4, 3, 6;
  CHECK(column_basis(rank1).cols() == 1);
}

TEST_CASE("Wolfe min-norm point") {
  // segment from (1,-1) to (1,1): minimizer (1,0)
  const auto p = min_norm_point({{1, -1}, {1, 1}});
  CHECK(p[0] == doctest::Approx(1));
  CHECK(std::abs(p[1]) < 1e-12);
  // hull containing the origin
  const auto z = min_norm_point({{1, 0}, {-1, 1}, {-1, -1}});
  CHECK(std::hypot(z[0], z[1]) < 1e-12);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 20; ++i) {
    std::vector<std::vector<double>> pts;
    for (int j = 0; j < 4; ++j) pts.push_back({u(rng) + 0.7, u(rng)});
    const auto m = min_norm_point(pts);
    CHECK(std::hypot(m[0], m[1]) == doctest::Approx(fixtures::grid_min_norm(pts)).epsilon(1e-6));
  }
}

TEST_CASE("matrix polynomial evaluation and quadratic form gradient") {
  MatrixPolynomial P(2, 2);
  P.set(0, 0, poly(2, {{1, {2, 0}}}));
  P.set(0, 1, poly(2, {{1, {1, 1}}}));
  P.set(1, 1, poly(2, {{-1, {0, 1}}}));
  const std::vector<double> x{2, 3};
  const auto M = P.eval_matrix(x);
  CHECK(M(0, 0) == 4);
  CHECK(M(1, 0) == 6);
  CHECK(M(1, 1) == -3);
  CHECK(P.degree() == 2);
  const std::vector<double> v{1, 1};
  // vᵀPv = x1² + 2x1x2 − x2 → gradient (2x1 + 2x2, 2x1 − 1)
  const auto g = P.quadratic_form_gradient(x, v);
  CHECK(g[0] == doctest::Approx(10));
  CHECK(g[1] == doctest::Approx(3));
}

TEST_CASE("simplex LP") {
  Mat a(2, 2);
  a << 1, 1, 1, 3;
  Vec b(2), c(2);
  b << 4, 6;
  c << 1, 2;
  const auto r = simplex_max(a, b, c);
  CHECK(r.value == doctest::Approx(5));  // vertex (3, 1)
  CHECK(r.x(0) == doctest::Approx(3));
}
