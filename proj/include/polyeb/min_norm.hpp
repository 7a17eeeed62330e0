#pragma once

#include <vector>

#include "polyeb/linalg.hpp"

namespace polyeb {

struct MinNormResult {
  Vec point;
  Vec weights;  // convex weights over the input points
  int major_cycles = 0;
};

/// Wolfe's minimum-norm-point algorithm over co(points). Stops when
/// ‖x‖² − min_i ⟨x, p_i⟩ ≤ tol·max(1, max_i ‖p_i‖²).
MinNormResult wolfe_min_norm(const std::vector<Vec>& points, double tol = 1e-12);

/// Convenience wrapper returning only the minimizer.
std::vector<double> min_norm_point(const std::vector<std::vector<double>>& points, double tol = 1e-12);

}  // namespace polyeb
