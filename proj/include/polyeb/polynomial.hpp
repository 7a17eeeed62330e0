#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "polyeb/rational.hpp"

namespace polyeb {

using Exponent = std::vector<std::uint32_t>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Values are immutable from the caller's point of view; every operation
/// returns a fresh polynomial. A flat double table is rebuilt whenever the
/// term map changes so that eval() never touches GMP.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t num_vars) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const Rational& c);
  static Polynomial variable(std::size_t num_vars, std::size_t index);
  static Polynomial monomial(std::size_t num_vars, const Exponent& e, const Rational& c);

  std::size_t num_vars() const { return num_vars_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c·x^e, dropping the term if it cancels.
  void add_term(const Exponent& e, const Rational& c);

  /// Total degree; 0 for the zero polynomial.
  unsigned degree() const;
  /// Degree in the variables listed.
  unsigned degree_in(std::span<const std::size_t> vars) const;

  double eval(std::span<const double> x) const;
  double eval(const std::vector<double>& x) const { return eval(std::span<const double>(x)); }
  Rational eval_exact(std::span<const Rational> x) const;

  Polynomial partial(std::size_t i) const;
  std::vector<Polynomial> gradient() const;
  /// Row-major n×n array of second partials.
  std::vector<Polynomial> hessian() const;

  /// Re-labels variable i as index_map[i] in a space of new_num_vars variables.
  Polynomial embed(std::size_t new_num_vars, std::span<const std::size_t> index_map) const;
  /// Substitutes polynomial images for every variable (composition).
  Polynomial compose(std::span<const Polynomial> images) const;

  bool depends_on(std::size_t i) const;
  Polynomial pow(unsigned k) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  /// Human-readable form using the given names (x1.. by default).
  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  void rebuild_cache();
  void check_arity(std::size_t got) const;

  std::size_t num_vars_ = 0;
  std::map<Exponent, Rational> terms_;
  // flat evaluation table: coefficient per term, exponents row-major
  std::vector<double> coeffs_;
  std::vector<std::uint32_t> powers_;
};

/// Raises v to a nonnegative integer power by repeated squaring.
double ipow(double v, std::uint32_t e);

}  // namespace polyeb
