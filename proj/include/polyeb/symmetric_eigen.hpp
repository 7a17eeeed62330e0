#pragma once

#include <Eigen/Dense>

#include <utility>

namespace polyeb {

/// Dense symmetric matrix. Construction rejects any pair (i,j) whose entries
/// differ in the last bit.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(Eigen::MatrixXd a);

  Eigen::Index size() const { return a_.rows(); }
  const Eigen::MatrixXd& matrix() const { return a_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return a_(i, j); }

 private:
  Eigen::MatrixXd a_;
};

struct EigenDecomposition {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns match values
  int sweeps = 0;
};

inline constexpr double kJacobiTol = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic Jacobi: rotates until every off-diagonal entry is at most
/// tol·max(1, ||M||_F). Throws SolverError after max_sweeps.
EigenDecomposition jacobi_eigen(const SymmetricMatrix& m, double tol = kJacobiTol,
                                int max_sweeps = kJacobiMaxSweeps);

/// Largest eigenvalue with a unit eigenvector.
std::pair<double, Eigen::VectorXd> lambda_max(const SymmetricMatrix& m, double tol = kJacobiTol);

}  // namespace polyeb
