#include "polyeb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyeb/errors.hpp"

namespace polyeb {

Vec singular_values(const Mat& a_in, double tol, int max_sweeps) {
  Mat u = a_in.cols() > a_in.rows() ? Mat(a_in.transpose()) : a_in;
  const Eigen::Index k = u.cols();
  int sweep = 0;
  for (bool rotated = true; rotated;) {
    if (sweep++ == max_sweeps) throw SolverError("one-sided Jacobi did not converge");
    rotated = false;
    for (Eigen::Index i = 0; i < k - 1; ++i) {
      for (Eigen::Index j = i + 1; j < k; ++j) {
        const double alpha = u.col(i).squaredNorm();
        const double beta = u.col(j).squaredNorm();
        const double gamma = u.col(i).dot(u.col(j));
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        Vec ui = u.col(i);
        u.col(i) = c * ui - s * u.col(j);
        u.col(j) = s * ui + c * u.col(j);
      }
    }
  }
  Vec sv(k);
  for (Eigen::Index i = 0; i < k; ++i) sv(i) = u.col(i).norm();
  std::sort(sv.data(), sv.data() + k, std::greater<>());
  return sv;
}

Vec lstsq(const Mat& a, const Vec& b) {
  if (a.rows() != b.size()) throw ArgumentError("lstsq: dimension mismatch");
  if (a.cols() == 0) return Vec(0);
  if (a.rows() == 0) return Vec::Zero(a.cols());
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
  cod.setThreshold(1e-12);
  return cod.solve(b);
}

Mat column_basis(const Mat& a, double rel_tol) {
  if (a.cols() == 0) return Mat(a.rows(), 0);
  Eigen::ColPivHouseholderQR<Mat> qr(a);
  qr.setThreshold(rel_tol);
  const Eigen::Index rank = qr.rank();
  Mat q = qr.householderQ();
  return q.leftCols(rank);
}

std::vector<SimplexVertex> cone_simplex_vertices(const Mat& cols,
                                                 const std::vector<std::pair<int, int>>& exclusive,
                                                 double tol, std::size_t max_combinations) {
  const int m = static_cast<int>(cols.rows());
  const int k = static_cast<int>(cols.cols());
  Mat aug(m + 1, k);
  aug.topRows(m) = cols;
  aug.row(m).setOnes();
  Vec rhs = Vec::Zero(m + 1);
  rhs(m) = 1.0;

  std::vector<SimplexVertex> out;
  std::size_t visited = 0;
  std::vector<int> idx;
  const int max_support = std::min(k, m + 1);
  for (int p = 1; p <= max_support; ++p) {
    idx.resize(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
      if (++visited > max_combinations) {
        throw SolverError("multiplier enumeration exceeded its combination budget");
      }
      bool allowed = true;
      for (const auto& [a, b] : exclusive) {
        if (std::find(idx.begin(), idx.end(), a) != idx.end() &&
            std::find(idx.begin(), idx.end(), b) != idx.end()) {
          allowed = false;
          break;
        }
      }
      if (allowed) {
        Mat sub(m + 1, p);
        for (int i = 0; i < p; ++i) sub.col(i) = aug.col(idx[static_cast<std::size_t>(i)]);
        Eigen::ColPivHouseholderQR<Mat> qr(sub);
        qr.setThreshold(1e-10);
        if (qr.rank() == p) {
          Vec us = qr.solve(rhs);
          const double res = (sub * us - rhs).norm();
          if (res <= tol && us.minCoeff() > 1e-12) {
            Vec u = Vec::Zero(k);
            for (int i = 0; i < p; ++i) u(idx[static_cast<std::size_t>(i)]) = us(i);
            bool dup = false;
            for (const auto& v : out) {
              if ((v.u - u).lpNorm<Eigen::Infinity>() <= 1e-9) {
                dup = true;
                break;
              }
            }
            if (!dup) out.push_back({u, res});
          }
        }
      }
      // next combination
      int pos = p - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - p + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < p; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return out;
}

SimplexResult simplex_max(const Mat& a, const Vec& b, const Vec& c, int max_pivots) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != rows || c.size() != n) throw ArgumentError("simplex: dimension mismatch");
  if (rows > 0 && b.minCoeff() < 0) throw ArgumentError("simplex: origin must be feasible");
  const Eigen::Index width = n + rows + 1;
  Mat t = Mat::Zero(rows + 1, width);
  t.topLeftCorner(rows, n) = a;
  t.block(0, n, rows, rows).setIdentity();
  t.col(width - 1).head(rows) = b;
  t.row(rows).head(n) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  const double eps = 1e-12;
  int pivots = 0;
  for (;;) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < width - 1; ++j) {
      if (t(rows, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (t(i, enter) > eps) {
        const double ratio = t(i, width - 1) / t(i, enter);
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) throw SolverError("linear program is unbounded");
    if (++pivots > max_pivots) throw SolverError("simplex pivot budget exhausted");
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= rows; ++i) {
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  SimplexResult out;
  out.x = Vec::Zero(n);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) out.x(basis[static_cast<std::size_t>(i)]) = t(i, width - 1);
  }
  out.value = c.dot(out.x);
  out.pivots = pivots;
  return out;
}

MarginLP max_margin_direction(const std::vector<Vec>& w) {
  if (w.empty()) throw ArgumentError("margin LP needs at least one vector");
  const Eigen::Index n = w[0].size();
  double big = 0.0;
  for (const auto& v : w) {
    if (v.size() != n) throw ArgumentError("margin LP: vectors differ in length");
    big = std::max(big, v.lpNorm<1>());
  }
  // ξ = u − 1 with u ∈ [0,2]^n, δ = t − T with t ≥ 0; the origin is feasible.
  const double T = big + 1.0;
  const Eigen::Index k = static_cast<Eigen::Index>(w.size());
  Mat a = Mat::Zero(k + n, n + 1);
  Vec b(k + n);
  for (Eigen::Index i = 0; i < k; ++i) {
    a.row(i).head(n) = -w[static_cast<std::size_t>(i)].transpose();
    a(i, n) = 1.0;
    b(i) = T - w[static_cast<std::size_t>(i)].sum();
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    a(k + j, j) = 1.0;
    b(k + j) = 2.0;
  }
  Vec c = Vec::Zero(n + 1);
  c(n) = 1.0;
  SimplexResult res = simplex_max(a, b, c);
  MarginLP out;
  out.xi = res.x.head(n) - Vec::Ones(n);
  // report the margin actually achieved by ξ rather than the LP bookkeeping value
  double delta = std::numeric_limits<double>::infinity();
  for (const auto& v : w) delta = std::min(delta, v.dot(out.xi));
  out.delta = delta;
  out.pivots = res.pivots;
  return out;
}

}  // namespace polyeb
