#pragma once

#include <functional>

namespace polyeb {

/// Index set given by a parametric curve t ↦ (y1(t), y2(t)) on [t_lo, t_hi],
/// paired with the bilinear objective f(x,y) = x·y1 + y2. Kept apart from the
/// semialgebraic path: Ω here is not described by polynomials.
struct CurveIndexSet {
  std::function<double(double)> y1;
  std::function<double(double)> y2;
  double t_lo = -0.8;
  double t_hi = 0.8;
  int grid = 10000;
};

struct CurveSup {
  double value = 0.0;
  double t_star = 0.0;
};

/// Grid search over t followed by golden-section refinement around the best
/// grid cell.
CurveSup curve_sup(const CurveIndexSet& omega, double x);

/// exp(-1/t²) and its first two derivatives (0 at t = 0).
double bump(double t);
double bump_d1(double t);
double bump_d2(double t);

/// Ω = {(φ'(t), φ(t) − tφ'(t)) : t ∈ [lo, hi]} for φ = bump.
CurveIndexSet example11_curve(double t_lo = -0.8, double t_hi = 0.8, int grid = 10000);

}  // namespace polyeb
