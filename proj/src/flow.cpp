#include "polyeb/flow.hpp"

#include <cmath>

#include "polyeb/errors.hpp"

namespace polyeb {
namespace {

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

SlopeResult slope_at(const CompiledSystem& cs, const std::vector<double>& x, const FlowOptions& opt, double t) {
  try {
    return slope_detail(cs, x, opt.alpha_cap, opt.sup);
  } catch (const SolverError& e) {
    throw SolverError(std::string(e.what()) + " (t = " + std::to_string(t) + ")", e.residual());
  }
}

}  // namespace

FlowRun integrate_flow(const ParametricSystem& sys, std::span<const double> x0, const FlowOptions& opt) {
  sys.validate();
  if (!(opt.step > 0)) throw ArgumentError("flow: step must be positive");
  if (!(opt.horizon > 0)) throw ArgumentError("flow: horizon must be positive");
  if (x0.size() != sys.n) throw ArgumentError("flow: x0 has the wrong dimension");
  const CompiledSystem cs(sys);
  FlowRun run;
  std::vector<double> x(x0.begin(), x0.end());
  double t = 0.0;
  SlopeResult cur = slope_at(cs, x, opt, t);

  // one accepted Euler step; returns false when the flow has stopped
  auto advance = [&](bool recording) {
    if (cur.slope <= opt.slope_stop) return false;
    double h = opt.step;
    for (int halving = 0;; ++halving) {
      std::vector<double> xn(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) xn[i] = x[i] - h * cur.min_norm[i];
      SlopeResult next = slope_at(cs, xn, opt, t + h);
      if (next.phi <= cur.phi + opt.increase_tol) {
        if (recording) {
          const double vn = cur.slope;
          run.step_used.push_back(h);
          run.energy_gap.push_back(cur.phi - next.phi - 0.5 * h * vn * vn);
          std::vector<double> dv(x.size());
          for (std::size_t i = 0; i < x.size(); ++i) dv[i] = next.min_norm[i] - cur.min_norm[i];
          run.smooth.push_back(norm(dv) <= 0.5 * std::max(vn, 1e-12) ? 1 : 0);
        }
        x = std::move(xn);
        cur = std::move(next);
        t += h;
        return true;
      }
      if (halving >= opt.max_halvings) {
        throw SolverError("flow: step halving exhausted at t = " + std::to_string(t), next.phi - cur.phi);
      }
      h *= 0.5;
      ++run.halvings;
    }
  };

  auto record = [&] {
    run.t.push_back(t);
    run.x.push_back(x);
    run.phi.push_back(cur.phi);
    run.slope.push_back(cur.slope);
  };
  record();
  while (t < opt.horizon - 1e-12) {
    if (!advance(true)) {
      run.converged = true;
      break;
    }
    record();
  }
  const double end = opt.horizon * opt.burn_down_factor;
  if (!run.converged) {
    while (t < end - 1e-12 && advance(false)) {
    }
  }
  run.xbar = x;
  run.phi_bar = sup_value(cs, x, opt.sup).value;
  return run;
}

FlowRun integrate_flow(const ParametricSystem& sys, std::span<const double> x0, double step, double horizon,
                       std::size_t budget, std::uint64_t seed) {
  FlowOptions opt;
  opt.step = step;
  opt.horizon = horizon;
  opt.sup.budget = budget;
  opt.sup.seed = seed;
  return integrate_flow(sys, x0, opt);
}

FlowRateReport verify_flow_rates(const FlowRun& run, const Rational& theta, double slack, double tail_fraction) {
  if (run.t.empty() || run.xbar.empty()) throw ArgumentError("verify_flow_rates: empty run");
  if (!(theta > Rational(1, 2) && theta < 1)) throw ArgumentError("verify_flow_rates: theta must lie in (1/2, 1)");
  FlowRateReport rep;
  rep.theta = theta;
  const Rational denom = 2 * theta - 1;
  const Rational e_dist = (1 - theta) / denom;
  const Rational e_val = 1 / denom;
  const double th = theta.get_d();

  std::vector<double> tp1, dist, tv, gap;
  for (std::size_t k = 0; k < run.t.size(); ++k) {
    std::vector<double> d(run.x[k].size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = run.x[k][i] - run.xbar[i];
    tp1.push_back(run.t[k] + 1.0);
    dist.push_back(norm(d));
    if (run.t[k] > 0) {
      tv.push_back(run.t[k]);
      gap.push_back(std::abs(run.phi[k] - run.phi_bar));
    }
    const double dphi = std::abs(run.phi[k] - run.phi_bar);
    if (dphi > 0) {
      const double ratio = run.slope[k] / std::pow(dphi, th);
      rep.min_slope_ratio = rep.ratio_points == 0 ? ratio : std::min(rep.min_slope_ratio, ratio);
      ++rep.ratio_points;
    }
  }
  auto judge = [&](RateCheck& rc, const std::vector<double>& xs, const std::vector<double>& ys, const Rational& th_e) {
    rc.theory = th_e.get_d();
    rc.fit = fit_power_law(xs, ys, tail_fraction);
    if (rc.fit.finite_time) {
      rc.status = "degenerate-pass";
      rc.pass = true;
    } else if (rc.fit.degenerate) {
      rc.status = "degenerate";
      rc.pass = false;
    } else if (rc.fit.super_polynomial) {
      rc.status = "super-polynomial";
      rc.pass = true;
    } else {
      rc.status = "fit";
      rc.pass = rc.fit.exponent >= rc.theory - slack;
    }
  };
  judge(rep.distance, tp1, dist, e_dist);
  judge(rep.value, tv, gap, e_val);
  for (char s : run.smooth) rep.kink_adjacent_steps += s ? 0 : 1;
  rep.pass = rep.distance.pass && rep.value.pass;
  return rep;
}

}  // namespace polyeb
