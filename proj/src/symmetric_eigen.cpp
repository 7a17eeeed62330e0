#include "polyeb/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "polyeb/errors.hpp"

namespace polyeb {

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw ArgumentError("symmetric matrix must be square");
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a_.cols(); ++j) {
      if (a_(i, j) != a_(j, i)) throw ArgumentError("matrix is not exactly symmetric");
    }
  }
}

EigenDecomposition jacobi_eigen(const SymmetricMatrix& m, double tol, int max_sweeps) {
  if (!(tol > 0)) throw ArgumentError("jacobi tolerance must be positive");
  Eigen::MatrixXd a = m.matrix();
  if (!a.allFinite()) throw ArgumentError("matrix has non-finite entries");
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double threshold = tol * std::max(1.0, a.norm());

  auto max_off = [&]() {
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) best = std::max(best, std::abs(a(i, j)));
    return best;
  };

  int sweep = 0;
  while (max_off() > threshold) {
    if (sweep == max_sweeps) {
      throw SolverError("jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps",
                        max_off());
    }
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rutishauser's stable rotation
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    out.vectors.col(k) = v.col(src).normalized();
  }
  out.sweeps = sweep;
  return out;
}

std::pair<double, Eigen::VectorXd> lambda_max(const SymmetricMatrix& m, double tol) {
  if (m.size() == 0) throw ArgumentError("lambda_max of an empty matrix");
  EigenDecomposition d = jacobi_eigen(m, tol);
  return {d.values(0), d.vectors.col(0)};
}

}  // namespace polyeb
