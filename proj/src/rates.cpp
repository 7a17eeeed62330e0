#include "polyeb/rates.hpp"

#include <cmath>

#include "polyeb/errors.hpp"

namespace polyeb {

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ArgumentError("loglog_fit: length mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  LogLogFit fit;
  fit.points = lx.size();
  if (lx.size() < 2) return fit;
  const double k = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0)) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.ok = true;
  return fit;
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y, double tail_fraction) {
  if (x.size() != y.size()) throw ArgumentError("fit_power_law: length mismatch");
  if (!(tail_fraction > 0 && tail_fraction <= 1)) throw ArgumentError("tail_fraction must lie in (0, 1]");
  const std::size_t total = x.size();
  const std::size_t start = total - static_cast<std::size_t>(std::ceil(tail_fraction * total));
  std::vector<double> tx, ty;
  PowerLawFit out;
  for (std::size_t i = start; i < total; ++i) {
    if (y[i] == 0.0) out.finite_time = true;
    if (y[i] > 0 && x[i] > 0) {
      tx.push_back(x[i]);
      ty.push_back(y[i]);
    }
  }
  out.points = tx.size();
  if (tx.size() < 3) {
    out.degenerate = true;
    out.note = out.finite_time ? "finite-time arrival" : "fewer than 3 positive tail values";
    return out;
  }
  const LogLogFit fit = loglog_fit(tx, ty);
  if (!fit.ok) {
    out.degenerate = true;
    out.note = "tail abscissae coincide";
    return out;
  }
  out.exponent = -fit.slope;
  out.M = std::exp(fit.intercept);
  if (tx.size() >= 6) {
    const std::size_t half = tx.size() / 2;
    const LogLogFit early = loglog_fit({tx.begin(), tx.begin() + half}, {ty.begin(), ty.begin() + half});
    const LogLogFit late = loglog_fit({tx.begin() + half, tx.end()}, {ty.begin() + half, ty.end()});
    if (early.ok && late.ok && -late.slope > 1.25 * -early.slope + 0.05 && -early.slope > 0) {
      out.super_polynomial = true;
      out.note = "faster than power law";
    }
  }
  if (out.finite_time && out.note.empty()) out.note = "finite-time arrival";
  return out;
}

}  // namespace polyeb
