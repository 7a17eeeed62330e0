#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace polyeb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}
inline std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

/// Singular values of A (descending) by one-sided Jacobi orthogonalization.
Vec singular_values(const Mat& a, double tol = 1e-14, int max_sweeps = 60);

/// Minimum-norm least-squares solution of A x = b.
Vec lstsq(const Mat& a, const Vec& b);

/// Orthonormal basis of the column span of A (rank decided at rel_tol).
Mat column_basis(const Mat& a, double rel_tol = 1e-10);

/// Vertices of {u ≥ 0 : C u = 0, Σu = 1} for the given columns C.
/// Supports listed in `exclusive` pairs never appear together. Supports are
/// enumerated up to size rows(C)+1; `max_combinations` guards the search.
struct SimplexVertex {
  Vec u;
  double residual = 0.0;
};
std::vector<SimplexVertex> cone_simplex_vertices(
    const Mat& cols, const std::vector<std::pair<int, int>>& exclusive, double tol,
    std::size_t max_combinations = 2'000'000);

/// Result of max δ s.t. ⟨w_k, ξ⟩ ≥ δ for all k, ‖ξ‖_∞ ≤ 1.
struct MarginLP {
  double delta = 0.0;
  Vec xi;
  int pivots = 0;
};
MarginLP max_margin_direction(const std::vector<Vec>& w);

/// Dense simplex for max cᵀx s.t. A x ≤ b, x ≥ 0 with b ≥ 0 (origin feasible).
/// Bland's rule; throws SolverError if unbounded or the pivot budget runs out.
struct SimplexResult {
  Vec x;
  double value = 0.0;
  int pivots = 0;
};
SimplexResult simplex_max(const Mat& a, const Vec& b, const Vec& c, int max_pivots = 100000);

}  // namespace polyeb
