#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "polyeb/errors.hpp"
#include "polyeb/exponents.hpp"
#include "polyeb/marginal.hpp"
#include "polyeb/reductions.hpp"

using namespace polyeb;
using fixtures::poly;

TEST_CASE("Lagrange basis is a Kronecker delta on 1..L") {
  for (unsigned L = 2; L <= 5; ++L) {
    for (unsigned l = 1; l <= L; ++l) {
      const Polynomial g = lagrange_basis(1, 0, L, l);
      CHECK(g.degree() == L - 1);
      for (unsigned j = 1; j <= L; ++j) {
        const std::vector<Rational> t{Rational(j)};
        CHECK(g.eval_exact(t) == (j == l ? 1 : 0));
      }
    }
  }
  CHECK_THROWS_AS(lagrange_basis(1, 0, 3, 4), ArgumentError);
}

TEST_CASE("collapsed system keeps the max over objectives") {
  ParametricSystem sys = fixtures::gsip_interval_system();
  sys.L = 2;
  sys.objectives.push_back(poly(2, {{Rational(1, 2), {0, 0}}}));
  sys.validate();
  const ParametricSystem col = collapse_objectives(sys);
  CHECK(col.L == 1);
  CHECK(col.m == 2);
  CHECK(col.d == sys.d + 1);
  CHECK(col.s() == sys.s() + 1);
  for (double x : {0.2, 1.8}) {
    const std::vector<double> xv{x};
    CHECK(sup_value(col, xv, 64, 0).value == doctest::Approx(std::max(x - 1, 0.5)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(collapse_objectives(fixtures::square_system()), ArgumentError);
}

TEST_CASE("PMI scalarization agrees with Eigen's top eigenvalue") {
  std::mt19937_64 rng(11);
  MatrixPolynomial P(2, 1);
  P.set(0, 0, poly(1, {{1, {2}}, {-1, {0}}}));
  P.set(0, 1, poly(1, {{1, {1}}}));
  P.set(1, 1, poly(1, {{-2, {0}}}));
  const ParametricSystem s = pmi_to_scalar(P, Box::cube(1, -1, 1));
  CHECK(s.m == 2);
  CHECK(s.d == 4);
  REQUIRE(s.origin.has_value());
  CHECK(s.origin->setting == Setting::PMI_4_6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 10; ++i) {
    const std::vector<double> x{u(rng)};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P.eval_matrix(x).matrix());
    CHECK(sup_value(s, x, 64, 0).value == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-9));
  }
}

TEST_CASE("SOCP reduction") {
  SOCPSpec spec;
  spec.n = 1;
  spec.m = 2;
  spec.d = 1;
  // ‖(x, 1)‖ ≤ 2
  spec.blocks = {{poly(1, {{1, {1}}}), poly(1, {{1, {0}}}), poly(1, {{2, {0}}})}};
  const ParametricSystem s = socp_to_sup(spec, Box::cube(1, -2, 2));
  CHECK(s.d == 2);
  CHECK(s.origin->setting == Setting::SOCP_5_3);
  for (double x : {-1.5, 0.0, 0.7}) {
    const std::vector<double> xv{x};
    CHECK(sup_value(s, xv, 64, 0).value == doctest::Approx(std::hypot(x, 1.0) - 2).epsilon(1e-9));
  }
  spec.blocks[0].pop_back();
  CHECK_THROWS_AS(spec.validate(), ArgumentError);
}

TEST_CASE("robust quadratic constraints become cone constraints") {
  RobustQuadSpec spec;
  spec.n = 1;
  QuadTriple nominal{{Rational(1)}, {Rational(0)}, Rational(-4)};  // x² − 4
  QuadTriple pert{{Rational(0)}, {Rational(1)}, Rational(0)};       // x
  spec.constraints = {{nominal, {pert}}};
  const SOCPSpec socp = robustify_quadratic(spec);
  CHECK(socp.m == 1);
  CHECK(socp.L() == 1);
  CHECK(socp.d == 2);
  // sup_{|u|≤1} x² − 4 + u·x = x² + |x| − 4
  const ParametricSystem s = socp_to_sup(socp, Box::cube(1, -3, 3));
  for (double x : {-1.0, 0.5, 2.0}) {
    const std::vector<double> xv{x};
    CHECK(sup_value(s, xv, 64, 0).value == doctest::Approx(x * x + std::abs(x) - 4).epsilon(1e-9));
  }
  spec.constraints[0].nominal.B = {Rational(1), Rational(2)};
  CHECK_THROWS_AS(robustify_quadratic(spec), ArgumentError);
}

TEST_CASE("certificate layout is a bijection onto its variables") {
  const CertificateLayout lay{2, 3, 1, 2};
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < lay.n; ++i) seen.insert(lay.x(i));
  for (std::size_t q = 0; q <= lay.n; ++q) {
    for (std::size_t i = 0; i < lay.m; ++i) seen.insert(lay.y(q, i));
    for (std::size_t i = 0; i < lay.r; ++i) seen.insert(lay.mu(q, i));
    for (std::size_t j = 0; j < lay.s; ++j) seen.insert(lay.kappa(q, j));
  }
  for (std::size_t q = 0; q < lay.n; ++q) seen.insert(lay.gamma(q));
  CHECK(seen.size() == lay.num_vars());
  CHECK(*seen.rbegin() == lay.num_vars() - 1);
}

TEST_CASE("certificate polynomial structure") {
  const ParametricSystem sys = fixtures::abs_system();
  const CertificatePolynomial c = build_certificate_polynomial(sys, 0.25);
  ExponentQuery q;
  q.setting = Setting::LOJA_3_5;
  q.n = 1;
  q.m = 1;
  q.r = 0;
  q.s = 1;
  q.d = 2;
  CHECK(c.P.num_vars() == static_cast<std::size_t>(exponent_for(q).R_arg_n));
  CHECK(c.P.degree() <= sys.d + 2);
  CHECK(c.phi_bar == Rational(1, 4));
  // P = −γ f(x,y1) − (1−γ) f(x,y2) + κ1 h(y1) + κ2 h(y2) + φ̄; at y1 = y2 = 1, x = 0.25 it vanishes
  const auto& lay = c.layout;
  std::vector<double> pt(lay.num_vars(), 0.0);
  pt[lay.x(0)] = 0.25;
  pt[lay.y(0, 0)] = pt[lay.y(1, 0)] = 1.0;
  pt[lay.gamma(0)] = 0.3;
  pt[lay.kappa(0, 0)] = 5.0;
  CHECK(std::abs(c.P.eval(pt)) < 1e-14);
  pt[lay.y(1, 0)] = -1.0;  // second copy picks −x
  CHECK(c.P.eval(pt) == doctest::Approx(0.25 + 0.7 * 0.25 - 0.3 * 0.25));
}
