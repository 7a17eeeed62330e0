#pragma once

#include <span>
#include <vector>

#include "polyeb/polynomial.hpp"
#include "polyeb/symmetric_eigen.hpp"

namespace polyeb {

/// Symmetric m×m matrix of polynomials; only the upper triangle is stored.
class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;
  MatrixPolynomial(std::size_t size, std::size_t num_vars);

  std::size_t size() const { return size_; }
  std::size_t num_vars() const { return num_vars_; }

  /// Entry (i,j); (j,i) refers to the same storage.
  const Polynomial& entry(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, Polynomial p);

  unsigned degree() const;
  SymmetricMatrix eval_matrix(std::span<const double> x) const;
  /// Gradient of x ↦ vᵀP(x)v at x, for a fixed numeric v.
  std::vector<double> quadratic_form_gradient(std::span<const double> x,
                                              std::span<const double> v) const;

  friend bool operator==(const MatrixPolynomial&, const MatrixPolynomial&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t size_ = 0;
  std::size_t num_vars_ = 0;
  std::vector<Polynomial> upper_;
  std::vector<std::vector<Polynomial>> grads_;
};

}  // namespace polyeb
