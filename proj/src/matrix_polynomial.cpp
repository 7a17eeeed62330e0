#include "polyeb/matrix_polynomial.hpp"

#include <algorithm>
#include <utility>

#include "polyeb/errors.hpp"

namespace polyeb {

MatrixPolynomial::MatrixPolynomial(std::size_t size, std::size_t num_vars)
    : size_(size), num_vars_(num_vars), upper_(size * (size + 1) / 2, Polynomial(num_vars)),
      grads_(size * (size + 1) / 2, std::vector<Polynomial>(num_vars, Polynomial(num_vars))) {}

std::size_t MatrixPolynomial::index(std::size_t i, std::size_t j) const {
  if (i >= size_ || j >= size_) throw ArgumentError("matrix entry index out of range");
  if (i > j) std::swap(i, j);
  return i * size_ - i * (i - 1) / 2 + (j - i);
}

const Polynomial& MatrixPolynomial::entry(std::size_t i, std::size_t j) const {
  return upper_[index(i, j)];
}

void MatrixPolynomial::set(std::size_t i, std::size_t j, Polynomial p) {
  if (p.num_vars() != num_vars_) throw ArgumentError("matrix entry has wrong number of variables");
  const std::size_t k = index(i, j);
  grads_[k] = p.gradient();
  upper_[k] = std::move(p);
}

unsigned MatrixPolynomial::degree() const {
  unsigned d = 0;
  for (const auto& p : upper_) d = std::max(d, p.degree());
  return d;
}

SymmetricMatrix MatrixPolynomial::eval_matrix(std::span<const double> x) const {
  if (x.size() != num_vars_) throw ArgumentError("eval_matrix: dimension mismatch");
  Eigen::MatrixXd a(size_, size_);
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = i; j < size_; ++j) {
      const double v = upper_[index(i, j)].eval(x);
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return SymmetricMatrix(std::move(a));
}

std::vector<double> MatrixPolynomial::quadratic_form_gradient(std::span<const double> x,
                                                              std::span<const double> v) const {
  if (x.size() != num_vars_ || v.size() != size_) {
    throw ArgumentError("quadratic_form_gradient: dimension mismatch");
  }
  std::vector<double> g(num_vars_, 0.0);
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = i; j < size_; ++j) {
      const double w = (i == j ? 1.0 : 2.0) * v[i] * v[j];
      if (w == 0.0) continue;
      const auto& grad = grads_[index(i, j)];
      for (std::size_t k = 0; k < num_vars_; ++k) g[k] += w * grad[k].eval(x);
    }
  }
  return g;
}

}  // namespace polyeb
