#include "polyeb/curve.hpp"

#include <cmath>

#include "polyeb/errors.hpp"

namespace polyeb {

double bump(double t) { return t == 0.0 ? 0.0 : std::exp(-1.0 / (t * t)); }

double bump_d1(double t) {
  const double e = bump(t);
  return e == 0.0 ? 0.0 : 2.0 / (t * t * t) * e;
}

double bump_d2(double t) {
  const double e = bump(t);
  if (e == 0.0) return 0.0;
  const double t2 = t * t;
  return (4.0 / (t2 * t2 * t2) - 6.0 / (t2 * t2)) * e;
}

CurveIndexSet example11_curve(double t_lo, double t_hi, int grid) {
  CurveIndexSet c;
  c.y1 = [](double t) { return bump_d1(t); };
  c.y2 = [](double t) { return bump(t) - t * bump_d1(t); };
  c.t_lo = t_lo;
  c.t_hi = t_hi;
  c.grid = grid;
  return c;
}

CurveSup curve_sup(const CurveIndexSet& omega, double x) {
  if (omega.grid < 2 || !(omega.t_lo < omega.t_hi)) throw ArgumentError("curve: bad interval or grid");
  auto f = [&](double t) { return x * omega.y1(t) + omega.y2(t); };
  const double h = (omega.t_hi - omega.t_lo) / (omega.grid - 1);
  int best = 0;
  double best_val = f(omega.t_lo);
  for (int i = 1; i < omega.grid; ++i) {
    const double v = f(omega.t_lo + h * i);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = omega.t_lo + h * std::max(best - 1, 0);
  double b = omega.t_lo + h * std::min(best + 1, omega.grid - 1);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  CurveSup out{best_val, omega.t_lo + h * best};
  const double mid = 0.5 * (a + b);
  const double fm = f(mid);
  if (fm > out.value) out = {fm, mid};
  return out;
}

}  // namespace polyeb
