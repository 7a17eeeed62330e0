#include "polyeb/verify.hpp"

#include <algorithm>
#include <cmath>

#include "polyeb/curve.hpp"
#include "polyeb/errors.hpp"
#include "polyeb/linalg.hpp"
#include "polyeb/parallel.hpp"

namespace polyeb {
namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13};

double radical_inverse(std::size_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::size_t default_grid(std::size_t n) { return n == 1 ? 201 : n == 2 ? 101 : 31; }

}  // namespace

std::vector<double> halton_point(std::size_t index, std::size_t dim) {
  if (dim > std::size(kPrimes)) throw ArgumentError("halton: dimension too large");
  std::vector<double> p(dim);
  for (std::size_t k = 0; k < dim; ++k) p[k] = radical_inverse(index, kPrimes[k]);
  return p;
}

std::vector<std::vector<double>> ball_samples(std::span<const double> center, double radius, std::size_t n,
                                              std::uint64_t seed) {
  if (!(radius > 0)) throw ArgumentError("radius must be positive");
  const std::size_t dim = center.size();
  std::vector<std::vector<double>> out;
  std::size_t index = 1 + static_cast<std::size_t>(seed % 4096);
  while (out.size() < n) {
    const auto u = halton_point(index++, dim);
    std::vector<double> x(dim);
    double r2 = 0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double c = 2.0 * u[k] - 1.0;
      r2 += c * c;
      x[k] = center[k] + radius * c;
    }
    if (r2 <= 1.0) out.push_back(std::move(x));
  }
  return out;
}

ExponentQuery error_bound_query(const ParametricSystem& sys) {
  if (sys.origin) return *sys.origin;
  ExponentQuery q;
  q.setting = Setting::EB_4_2;
  q.n = static_cast<long>(sys.n);
  q.m = static_cast<long>(sys.m);
  q.r = static_cast<long>(sys.r());
  q.s = static_cast<long>(sys.s());
  q.d = static_cast<long>(sys.d);
  q.L = static_cast<long>(sys.L);
  return q;
}

ExponentQuery loja_query(const ParametricSystem& sys) {
  ExponentQuery q;
  q.setting = Setting::LOJA_3_5;
  q.n = static_cast<long>(sys.n);
  q.m = static_cast<long>(sys.m);
  q.r = static_cast<long>(sys.r());
  q.s = static_cast<long>(sys.s());
  q.d = static_cast<long>(sys.d);
  return q;
}

ErrorBoundReport verify_error_bound(const ParametricSystem& sys, std::span<const double> xbar, std::size_t n_samples,
                                    double radius, std::uint64_t seed, const ErrorBoundOptions& opt) {
  sys.validate();
  if (sys.n > 3) throw ArgumentError("verify_error_bound: distance oracle supports n <= 3 only");
  if (xbar.size() != sys.n) throw ArgumentError("verify_error_bound: xbar has the wrong dimension");
  if (!(radius > 0)) throw ArgumentError("verify_error_bound: radius must be positive");
  ErrorBoundReport rep;
  rep.slack = opt.slack;
  rep.theory = exponent_for(error_bound_query(sys));
  const std::size_t grid = opt.grid_per_axis ? opt.grid_per_axis : default_grid(sys.n);
  const SolutionSetGrid oracle(sys, grid, opt.sup_budget, seed);
  rep.grid_spacing = oracle.spacing();
  const auto xs = ball_samples(xbar, radius, n_samples, seed);
  const CompiledSystem cs(sys);
  SupOptions so;
  so.budget = opt.sup_budget;
  so.seed = seed;
  rep.rows.resize(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    ErrorBoundRow row;
    row.x = xs[i];
    row.residual = sup_value(cs, row.x, so).residual;
    row.dist = oracle.distance(row.x);
    rep.rows[i] = std::move(row);
  });
  std::vector<double> res, dst;
  for (const auto& row : rep.rows) {
    if (row.residual <= 1e-12) {
      ++rep.zero_residual;
      continue;
    }
    if (row.dist > 0 && std::isfinite(row.dist)) {
      res.push_back(row.residual);
      dst.push_back(row.dist);
    }
  }
  if (rep.zero_residual == rep.rows.size()) {
    rep.no_information = true;
    rep.verdict = true;
    return rep;
  }
  const LogLogFit fit = loglog_fit(res, dst);
  rep.points_used = fit.points;
  if (!fit.ok) {
    rep.no_information = true;
    rep.verdict = true;
    return rep;
  }
  rep.tau_emp = fit.slope;
  rep.c = std::exp(fit.intercept);
  rep.verdict = rep.theory.exponent.get_d() <= rep.tau_emp + rep.slack;
  return rep;
}

LojaReport verify_loja(const ParametricSystem& sys, std::span<const double> xbar, std::size_t n_samples, double radius,
                       std::uint64_t seed, const LojaOptions& opt) {
  sys.validate();
  if (sys.L != 1) throw ArgumentError("verify_loja: needs L = 1 (collapse first)");
  if (xbar.size() != sys.n) throw ArgumentError("verify_loja: xbar has the wrong dimension");
  if (!(radius > 0)) throw ArgumentError("verify_loja: radius must be positive");
  LojaReport rep;
  rep.theory = exponent_for(loja_query(sys));
  const CompiledSystem cs(sys);
  SupOptions so;
  so.budget = opt.sup_budget;
  so.seed = seed;
  rep.phi_bar = sup_value(cs, xbar, so).value;
  const auto xs = ball_samples(xbar, radius, n_samples, seed);
  rep.rows.resize(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const SlopeResult s = slope_detail(cs, xs[i], kDefaultAlphaCap, so);
    rep.rows[i] = {xs[i], s.slope, std::abs(s.phi - rep.phi_bar)};
  });
  const double expo = 1.0 - rep.theory.exponent.get_d();
  std::vector<double> dphi, slopes;
  bool first = true;
  rep.min_ratio_extra.clear();
  for (double e : opt.extra_exponents) rep.min_ratio_extra.emplace_back(e, 0.0);
  for (const auto& row : rep.rows) {
    if (!(row.dphi > 0)) continue;
    const double r = row.slope / std::pow(row.dphi, expo);
    rep.min_ratio_theory = first ? r : std::min(rep.min_ratio_theory, r);
    for (auto& [e, mr] : rep.min_ratio_extra) {
      const double re = row.slope / std::pow(row.dphi, e);
      mr = first ? re : std::min(mr, re);
    }
    first = false;
    dphi.push_back(row.dphi);
    slopes.push_back(row.slope);
  }
  if (first) {
    rep.no_information = true;
    rep.verdict = true;
    return rep;
  }
  const LogLogFit fit = loglog_fit(dphi, slopes);
  rep.points_used = fit.points;
  if (fit.ok) rep.one_minus_tau_emp = fit.slope;
  rep.verdict = rep.min_ratio_theory >= opt.threshold;
  return rep;
}

double example11_ratio(long k, double tau) {
  const double kp = static_cast<double>(k) + 1.0;
  return std::pow(kp, 1.0 / tau) / std::sqrt(std::log(kp));
}

CounterexampleReport counterexample_1_1(long k_max) {
  if (k_max < 10) throw ArgumentError("counterexample: k_max must be at least 10");
  CounterexampleReport rep;
  const CurveIndexSet omega = example11_curve();
  std::vector<long> ks;
  for (long k = 10; k <= k_max; k *= 10) {
    ks.push_back(k);
    if (k > k_max / 10) break;
  }
  rep.rows.resize(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    CounterexampleRow row;
    row.k = ks[i];
    row.x = 1.0 / std::sqrt(std::log(static_cast<double>(row.k) + 1.0));
    // S = {0}: φ > 0 away from the origin
    row.dist = std::abs(row.x);
    row.residual = std::max(curve_sup(omega, row.x).value, 0.0);
    row.closed_form = 1.0 / (static_cast<double>(row.k) + 1.0);
    row.relative_error = std::abs(row.residual - row.closed_form) / row.closed_form;
    for (double tau : rep.taus) row.ratios.push_back(row.dist / std::pow(row.residual, 1.0 / tau));
    rep.rows[i] = std::move(row);
  });
  rep.residual_ok = true;
  for (const auto& row : rep.rows) rep.residual_ok = rep.residual_ok && row.relative_error <= 1e-6;
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    for (std::size_t t = 0; t < rep.taus.size(); ++t) {
      rep.monotone = rep.monotone && rep.rows[i].ratios[t] > rep.rows[i - 1].ratios[t];
    }
  }
  const auto last = std::find_if(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.k == 1'000'000; });
  rep.growth_checked = last != rep.rows.end();
  rep.growth_ok = rep.growth_checked;
  for (std::size_t t = 0; t < rep.taus.size(); ++t) {
    const auto& end = rep.growth_checked ? *last : rep.rows.back();
    const double g = end.ratios[t] / rep.rows.front().ratios[t];
    rep.growth.push_back(g);
    if (rep.growth_checked) rep.growth_ok = rep.growth_ok && g >= 1e3;
  }
  return rep;
}

StabilityReport gsip_stability_probe(const ParametricSystem& sys, const Polynomial& p0, std::span<const double> ubar,
                                     const std::vector<double>& magnitudes, std::uint64_t seed,
                                     const GsipProbeOptions& opt) {
  sys.validate();
  const std::size_t n = sys.n;
  if (n > 3) throw ArgumentError("gsip probe: n <= 3 only");
  if (p0.num_vars() != n) throw ArgumentError("gsip probe: p0 must have n variables");
  if (ubar.size() != n) throw ArgumentError("gsip probe: ubar has the wrong dimension");
  if (magnitudes.empty()) throw ArgumentError("gsip probe: no magnitudes");
  std::vector<double> dir = opt.direction;
  if (dir.empty()) {
    dir.assign(n, 0.0);
    dir[0] = 1.0;
  }
  if (dir.size() != n) throw ArgumentError("gsip probe: direction has the wrong dimension");
  {
    double s = 0;
    for (double v : dir) s += v * v;
    if (!(s > 0)) throw ArgumentError("gsip probe: direction must be nonzero");
    for (double& v : dir) v /= std::sqrt(s);
  }

  StabilityReport rep;
  ExponentQuery q;
  q.setting = sys.r() == 0 ? Setting::GSIP_SHARP_5_2R : Setting::GSIP_5_1;
  q.n = static_cast<long>(n);
  q.m = static_cast<long>(sys.m);
  q.r = static_cast<long>(sys.r());
  q.s = static_cast<long>(sys.s());
  q.d = static_cast<long>(std::max(sys.d, p0.degree()));
  q.L = static_cast<long>(sys.L);
  rep.theory = exponent_for(q);

  const SolutionSetGrid feasible(sys, opt.grid_per_axis, opt.sup_budget, seed);
  if (feasible.empty()) throw ArgumentError("gsip probe: no feasible grid point in x_box");
  rep.feasible_grid_points = feasible.feasible_points().size();
  const CompiledSystem cs(sys);
  SupOptions so;
  so.budget = opt.sup_budget;
  so.seed = seed;
  const auto grad = p0.gradient();
  const auto hess = p0.hessian();

  auto is_feasible = [&](const std::vector<double>& x) {
    return sys.x_box.contains(x) && sup_value(cs, x, so).residual <= 1e-8;
  };

  // minimizers of p0 − ⟨u,·⟩ over the feasible set, within 1e-6 of the best value
  auto solve = [&](const std::vector<double>& u, double& optimum) {
    auto p = [&](const std::vector<double>& x) {
      double v = p0.eval(x);
      for (std::size_t i = 0; i < n; ++i) v -= u[i] * x[i];
      return v;
    };
    const auto& pts = feasible.feasible_points();
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order[i] = i;
    std::vector<double> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = p(pts[i]);
    const std::size_t k = std::min(opt.starts, pts.size());
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](std::size_t a, std::size_t b) {
      return vals[a] < vals[b] || (vals[a] == vals[b] && a < b);
    });
    std::vector<std::vector<double>> sols(k);
    std::vector<double> sval(k);
    for (std::size_t s = 0; s < k; ++s) {
      std::vector<double> x = pts[order[s]];
      double fx = vals[order[s]];
      for (int it = 0; it < 200; ++it) {
        Vec g(n);
        Mat H(n, n);
        for (std::size_t i = 0; i < n; ++i) {
          g(i) = grad[i].eval(x) - u[i];
          for (std::size_t j = 0; j < n; ++j) H(i, j) = hess[i * n + j].eval(x);
        }
        if (g.norm() <= 1e-15) break;
        Vec step;
        Eigen::LLT<Mat> llt(H);
        if (llt.info() == Eigen::Success) {
          step = -llt.solve(g);
          if (!step.allFinite() || step.dot(g) >= 0) step = -g;
        } else {
          step = -g;
        }
        double alpha = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 50; ++bt) {
          std::vector<double> xt(n);
          for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + alpha * step(i);
          const double ft = p(xt);
          if (ft < fx && is_feasible(xt)) {
            x = std::move(xt);
            fx = ft;
            moved = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!moved || alpha * step.norm() <= 1e-15) break;
      }
      sols[s] = std::move(x);
      sval[s] = fx;
    }
    optimum = *std::min_element(sval.begin(), sval.end());
    std::vector<std::vector<double>> out;
    for (std::size_t s = 0; s < k; ++s) {
      if (sval[s] > optimum + 1e-6) continue;
      const bool dup = std::any_of(out.begin(), out.end(), [&](const auto& o) { return dist(o, sols[s]) <= 1e-6; });
      if (!dup) out.push_back(sols[s]);
    }
    return out;
  };

  double base_opt = 0;
  rep.base_solutions = solve(std::vector<double>(ubar.begin(), ubar.end()), base_opt);
  rep.rows.resize(magnitudes.size());
  parallel_for(magnitudes.size(), [&](std::size_t i) {
    StabilityRow row;
    row.magnitude = std::abs(magnitudes[i]);
    std::vector<double> u(ubar.begin(), ubar.end());
    for (std::size_t k = 0; k < n; ++k) u[k] += magnitudes[i] * dir[k];
    row.solutions = solve(u, row.optimum);
    for (const auto& s : row.solutions) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& b : rep.base_solutions) best = std::min(best, dist(s, b));
      row.excess = std::max(row.excess, best);
    }
    rep.rows[i] = std::move(row);
  });
  std::vector<double> mags, exc;
  for (const auto& row : rep.rows) {
    if (row.magnitude > 0 && row.excess > 1e-12) {
      mags.push_back(row.magnitude);
      exc.push_back(row.excess);
    }
  }
  const LogLogFit fit = loglog_fit(mags, exc);
  rep.points_used = fit.points;
  if (!fit.ok || fit.points < 2) {
    rep.degenerate = true;
    rep.verdict = true;
    return rep;
  }
  rep.exponent = fit.slope;
  rep.c = std::exp(fit.intercept);
  rep.verdict = rep.theory.exponent.get_d() <= rep.exponent + opt.slack;
  return rep;
}

}  // namespace polyeb
