#include "polyeb/min_norm.hpp"

#include <algorithm>
#include <cmath>

#include "polyeb/errors.hpp"

namespace polyeb {
namespace {

// Affine minimizer of ‖Σ α_i p_i‖ subject to Σ α_i = 1 over the active set.
Vec affine_minimizer(const std::vector<Vec>& pts, const std::vector<int>& active) {
  const auto k = static_cast<Eigen::Index>(active.size());
  Mat kkt = Mat::Zero(k + 1, k + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      kkt(i, j) = pts[static_cast<std::size_t>(active[static_cast<std::size_t>(i)])].dot(
          pts[static_cast<std::size_t>(active[static_cast<std::size_t>(j)])]);
    }
    kkt(i, k) = 1.0;
    kkt(k, i) = 1.0;
  }
  Vec rhs = Vec::Zero(k + 1);
  rhs(k) = 1.0;
  Vec sol = lstsq(kkt, rhs);
  Vec alpha = sol.head(k);
  const double s = alpha.sum();
  if (std::abs(s) > 1e-300) alpha /= s;
  return alpha;
}

}  // namespace

MinNormResult wolfe_min_norm(const std::vector<Vec>& points, double tol) {
  if (points.empty()) throw ArgumentError("min-norm point of an empty set");
  const Eigen::Index dim = points[0].size();
  double scale = 1.0;
  for (const auto& p : points) {
    if (p.size() != dim) throw ArgumentError("min-norm point: vectors differ in length");
    if (!p.allFinite()) throw ArgumentError("min-norm point: non-finite vector");
    scale = std::max(scale, p.squaredNorm());
  }
  const int n = static_cast<int>(points.size());

  int start = 0;
  for (int i = 1; i < n; ++i) {
    if (points[static_cast<std::size_t>(i)].squaredNorm() <
        points[static_cast<std::size_t>(start)].squaredNorm()) {
      start = i;
    }
  }
  std::vector<int> active{start};
  std::vector<double> lambda{1.0};
  Vec x = points[static_cast<std::size_t>(start)];

  MinNormResult out;
  const int max_major = 50 * n + 100;
  for (int major = 0; major < max_major; ++major) {
    out.major_cycles = major + 1;
    int j = 0;
    double best = x.dot(points[0]);
    for (int i = 1; i < n; ++i) {
      const double v = x.dot(points[static_cast<std::size_t>(i)]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (x.squaredNorm() - best <= tol * scale) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 4 * n + 10; ++minor) {
      Vec alpha = affine_minimizer(points, active);
      if (alpha.minCoeff() > 1e-15) {
        for (std::size_t i = 0; i < active.size(); ++i) lambda[i] = alpha(static_cast<Eigen::Index>(i));
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        const double a = alpha(static_cast<Eigen::Index>(i));
        if (a <= 1e-15) {
          const double denom = lambda[i] - a;
          if (denom > 0) theta = std::min(theta, lambda[i] / denom);
        }
      }
      for (std::size_t i = 0; i < active.size(); ++i) {
        lambda[i] = (1.0 - theta) * lambda[i] + theta * alpha(static_cast<Eigen::Index>(i));
      }
      std::vector<int> keep_idx;
      std::vector<double> keep_lambda;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (lambda[i] > 1e-15) {
          keep_idx.push_back(active[i]);
          keep_lambda.push_back(lambda[i]);
        }
      }
      if (keep_idx.size() == active.size()) {
        // numerical stall: drop the smallest weight
        auto it = std::min_element(keep_lambda.begin(), keep_lambda.end());
        const auto pos = static_cast<std::size_t>(it - keep_lambda.begin());
        keep_idx.erase(keep_idx.begin() + static_cast<long>(pos));
        keep_lambda.erase(keep_lambda.begin() + static_cast<long>(pos));
      }
      double total = 0.0;
      for (double l : keep_lambda) total += l;
      for (double& l : keep_lambda) l /= total;
      active = std::move(keep_idx);
      lambda = std::move(keep_lambda);
    }
    x = Vec::Zero(dim);
    for (std::size_t i = 0; i < active.size(); ++i) x += lambda[i] * points[static_cast<std::size_t>(active[i])];
  }
  out.point = x;
  out.weights = Vec::Zero(n);
  for (std::size_t i = 0; i < active.size(); ++i) out.weights(active[i]) = lambda[i];
  return out;
}

std::vector<double> min_norm_point(const std::vector<std::vector<double>>& points, double tol) {
  std::vector<Vec> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back(to_vec(p));
  return to_std(wolfe_min_norm(pts, tol).point);
}

}  // namespace polyeb
