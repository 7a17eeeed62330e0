#pragma once

#include <cstddef>
#include <vector>

#include "polyeb/matrix_polynomial.hpp"
#include "polyeb/semialg.hpp"

namespace polyeb {

/// Second-order cone constraints ‖(f_1..f_m)(x)‖ ≤ f_{m+1}(x), one per block.
struct SOCPSpec {
  std::size_t n = 0;
  std::size_t m = 0;
  unsigned d = 1;
  std::vector<std::vector<Polynomial>> blocks;  // L blocks of m+1 polynomials in n vars

  std::size_t L() const { return blocks.size(); }
  void validate() const;
  friend bool operator==(const SOCPSpec&, const SOCPSpec&) = default;
};

/// xᵀBx + bᵀx + β with exact coefficients; B symmetric, row-major.
struct QuadTriple {
  std::vector<Rational> B;
  std::vector<Rational> b;
  Rational beta;
  friend bool operator==(const QuadTriple&, const QuadTriple&) = default;
};

struct RobustConstraint {
  QuadTriple nominal;
  std::vector<QuadTriple> perturbations;
  friend bool operator==(const RobustConstraint&, const RobustConstraint&) = default;
};

struct RobustQuadSpec {
  std::size_t n = 0;
  std::vector<RobustConstraint> constraints;
  void validate() const;
  friend bool operator==(const RobustQuadSpec&, const RobustQuadSpec&) = default;
};

Polynomial quadratic_polynomial(std::size_t n, const QuadTriple& q);

/// γ_l(t) = Π_{j≠l} (t−j)/(l−j) as a polynomial in `num_vars` variables, t at index t_index.
Polynomial lagrange_basis(std::size_t num_vars, std::size_t t_index, unsigned L, unsigned l);

/// Single-objective system over (y, t) with t pinned to {1..L} by Π(t−l) = 0.
ParametricSystem collapse_objectives(const ParametricSystem& sys);

/// f = yᵀP(x)y on the unit sphere ‖y‖² = 1.
ParametricSystem pmi_to_scalar(const MatrixPolynomial& P, const Box& x_box);

ParametricSystem socp_to_sup(const SOCPSpec& spec, const Box& x_box);

SOCPSpec robustify_quadratic(const RobustQuadSpec& spec);

/// Variable layout (x, y^(1..n+1), γ^(1..n), μ^(1..n+1), κ^(1..n+1)).
struct CertificateLayout {
  std::size_t n = 0, m = 0, r = 0, s = 0;

  std::size_t num_vars() const { return 2 * n + (m + r + s) * (n + 1); }
  std::size_t x(std::size_t i) const { return i; }
  std::size_t y(std::size_t q, std::size_t i) const { return n + q * m + i; }
  std::size_t gamma(std::size_t q) const { return n + (n + 1) * m + q; }
  std::size_t mu(std::size_t q, std::size_t i) const { return 2 * n + (n + 1) * m + q * r + i; }
  std::size_t kappa(std::size_t q, std::size_t j) const {
    return 2 * n + (n + 1) * (m + r) + q * s + j;
  }
};

struct CertificatePolynomial {
  Polynomial P;
  CertificateLayout layout;
  Rational phi_bar;           // rational stand-in for φ(x̄)
  double phi_bar_error = 0.0;  // |phi_bar − supplied value|
};

/// Σ_q F(x, y^(q), γ^(q), μ^(q), κ^(q)) with the last weight 1 − Σγ, plus φ(x̄),
/// where F = −γf + Σμ_i²g_i + Σκ_j h_j.
CertificatePolynomial build_certificate_polynomial(const ParametricSystem& sys, double phi_bar);

}  // namespace polyeb
