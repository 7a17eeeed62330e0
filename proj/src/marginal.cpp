#include "polyeb/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyeb/errors.hpp"
#include "polyeb/linalg.hpp"
#include "polyeb/min_norm.hpp"
#include "polyeb/parallel.hpp"

namespace polyeb {
namespace {

struct AscentResult {
  std::vector<double> y;
  double value = -std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Outward normals of constraints that are active at y: equalities always,
// inequalities and box faces only when they block the current direction.
Vec projected_direction(const CompiledSet& set, std::span<const double> xy, std::span<const double> y,
                        const Vec& grad) {
  const auto m = grad.size();
  std::vector<Vec> fixed;
  for (const auto& h : set.h) fixed.push_back(h.gy(xy));
  std::vector<Vec> candidates;
  for (const auto& g : set.g) {
    if (g.value(xy) >= -1e-8) candidates.push_back(g.gy(xy));
  }
  const Box& box = set.desc->box;
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (y[kk] <= box.lower[kk] + 1e-12) {
      candidates.push_back(-Vec::Unit(m, k));
    } else if (y[kk] >= box.upper[kk] - 1e-12) {
      candidates.push_back(Vec::Unit(m, k));
    }
  }
  std::vector<char> used(candidates.size(), 0);
  Vec d = grad;
  for (std::size_t round = 0; round <= candidates.size(); ++round) {
    Mat n(m, static_cast<Eigen::Index>(fixed.size()));
    for (std::size_t i = 0; i < fixed.size(); ++i) n.col(static_cast<Eigen::Index>(i)) = fixed[i];
    if (fixed.empty()) {
      d = grad;
    } else {
      Mat q = column_basis(n);
      d = grad - q * (q.transpose() * grad);
    }
    std::size_t worst = candidates.size();
    double worst_val = 1e-14;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      const double v = candidates[i].dot(d);
      if (v > worst_val * std::max(1.0, candidates[i].norm())) {
        worst_val = v;
        worst = i;
      }
    }
    if (worst == candidates.size()) break;
    used[worst] = 1;
    fixed.push_back(candidates[worst]);
  }
  return d;
}

bool clamp_to_box(const Box& box, std::vector<double>& y) {
  bool moved = false;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double c = std::clamp(y[k], box.lower[k], box.upper[k]);
    if (c != y[k]) {
      y[k] = c;
      moved = true;
    }
  }
  return moved;
}

// Newton on the KKT system of the constraints active at y. Accepted only if it
// stays feasible, does not lose value and reduces the stationarity residual.
void newton_polish(const CompiledSystem& cs, std::span<const double> x, std::size_t l, AscentResult& res) {
  const CompiledSet& set = cs.set;
  const auto m = static_cast<Eigen::Index>(cs.sys->m);
  auto xy = join_xy(x, res.y);
  std::vector<const CompiledPoly*> act;
  std::vector<char> is_ineq;
  for (const auto& h : set.h) {
    act.push_back(&h);
    is_ineq.push_back(0);
  }
  for (const auto& g : set.g) {
    if (g.value(xy) >= -1e-7) {
      act.push_back(&g);
      is_ineq.push_back(1);
    }
  }
  const auto k = static_cast<Eigen::Index>(act.size());
  if (k > m) return;

  auto stationarity = [&](std::span<const double> pt, Vec* nu_out) {
    Vec grad = cs.f[l].gy(pt);
    Mat c(m, k);
    for (Eigen::Index i = 0; i < k; ++i) c.col(i) = act[static_cast<std::size_t>(i)]->gy(pt);
    Vec nu = k > 0 ? lstsq(c, grad) : Vec(0);
    if (nu_out) *nu_out = nu;
    return k > 0 ? (grad - c * nu).norm() : grad.norm();
  };

  Vec nu;
  const double start_res = stationarity(xy, &nu);
  if (start_res <= 1e-13) return;
  std::vector<double> y = res.y;
  for (int it = 0; it < 20; ++it) {
    xy = join_xy(x, y);
    Vec grad = cs.f[l].gy(xy);
    Mat hess = cs.f[l].hy(xy);
    Mat c(m, k);
    Vec cv(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto* p = act[static_cast<std::size_t>(i)];
      c.col(i) = p->gy(xy);
      cv(i) = p->value(xy);
      hess -= nu(i) * p->hy(xy);
    }
    Mat kkt = Mat::Zero(m + k, m + k);
    kkt.topLeftCorner(m, m) = hess;
    kkt.topRightCorner(m, k) = -c;
    kkt.bottomLeftCorner(k, m) = c.transpose();
    Vec rhs(m + k);
    rhs.head(m) = -(grad - c * nu);
    rhs.tail(k) = -cv;
    Vec step = lstsq(kkt, rhs);
    if (!step.allFinite()) return;
    for (Eigen::Index i = 0; i < m; ++i) y[static_cast<std::size_t>(i)] += step(i);
    nu += step.tail(k);
    if (step.norm() <= 1e-15) break;
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (is_ineq[static_cast<std::size_t>(i)] && nu(i) < -1e-10) return;
  }
  if (!membership(*set.desc, x, y, 1e-10)) return;
  const auto new_xy = join_xy(x, y);
  const double v = cs.f[l].value(new_xy);
  if (v < res.value - 1e-12 * (1.0 + std::abs(res.value))) return;
  if (stationarity(new_xy, nullptr) >= start_res) return;
  res.y = std::move(y);
  res.value = v;
}

AscentResult ascend(const CompiledSystem& cs, std::span<const double> x, std::vector<double> y, std::size_t l,
                    int max_iter) {
  const CompiledSet& set = cs.set;
  const Box& box = set.desc->box;
  AscentResult res;
  res.y = std::move(y);
  res.value = cs.f[l].value(join_xy(x, res.y));
  double step = 0.1 * box.diameter();
  for (int it = 0; it < max_iter; ++it) {
    const auto xy = join_xy(x, res.y);
    Vec grad = cs.f[l].gy(xy);
    Vec d = projected_direction(set, xy, res.y, grad);
    const double dn = d.norm();
    if (dn <= 1e-12) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    double t = step / std::max(dn, 1e-300);
    for (int ls = 0; ls < 50; ++ls, t *= 0.5) {
      std::vector<double> trial = res.y;
      for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += t * d(static_cast<Eigen::Index>(k));
      clamp_to_box(box, trial);
      if (!set.h.empty() || !set.g.empty()) {
        restore_feasibility(set, x, trial, 10, true);
        clamp_to_box(box, trial);
      }
      if (!membership(*set.desc, x, trial, 1e-10)) continue;
      const double v = cs.f[l].value(join_xy(x, trial));
      if (v >= res.value + 1e-4 * t * dn * dn) {
        res.y = std::move(trial);
        res.value = v;
        accepted = true;
        step = std::min(2.0 * t * dn, box.diameter());
        break;
      }
    }
    if (!accepted) {
      res.converged = dn <= 1e-6;
      break;
    }
  }
  newton_polish(cs, x, l, res);
  {
    const auto xy = join_xy(x, res.y);
    Vec d = projected_direction(set, xy, res.y, cs.f[l].gy(xy));
    if (d.norm() <= 1e-8) res.converged = true;
  }
  return res;
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

SupEvaluation sup_value(const CompiledSystem& cs, std::span<const double> x, const SupOptions& opt) {
  const ParametricSystem& sys = *cs.sys;
  if (x.size() != sys.n) throw ArgumentError("sup_value: x has wrong dimension");
  if (opt.budget < 1) throw ArgumentError("sup_value: budget must be at least 1");
  auto samples = sample_parameter_set(cs.set, x, opt.budget, opt.seed);
  if (samples.empty()) throw EmptyParameterSetError("empty parameter set");
  const double merge_radius = 1e-3 * sys.Y.box.diameter();
  const double merge2 = merge_radius * merge_radius;

  struct Start {
    std::size_t l;
    std::vector<double> y;
    double value;
  };
  std::vector<Start> starts;
  for (std::size_t l = 0; l < sys.L; ++l) {
    std::vector<Start> ranked;
    ranked.reserve(samples.size());
    for (const auto& y : samples) ranked.push_back({l, y, cs.f[l].value(join_xy(x, y))});
    std::stable_sort(ranked.begin(), ranked.end(), [](const Start& a, const Start& b) {
      if (a.value != b.value) return a.value > b.value;
      return lex_less(a.y, b.y);
    });
    std::vector<Start> picked;
    for (auto& s : ranked) {
      if (picked.size() >= opt.starts) break;
      bool near = false;
      for (const auto& p : picked) {
        if (dist2(p.y, s.y) <= merge2) {
          near = true;
          break;
        }
      }
      if (!near) picked.push_back(std::move(s));
    }
    for (auto& p : picked) starts.push_back(std::move(p));
  }

  std::vector<AscentResult> results(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    results[i] = ascend(cs, x, starts[i].y, starts[i].l, opt.max_iter);
  });

  SupEvaluation out;
  out.samples = samples.size();
  out.starts = starts.size();
  out.value = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    out.value = std::max(out.value, r.value);
    if (r.converged) ++out.converged;
  }
  out.residual = std::max(out.value, 0.0);

  const double cluster_tol = 1e-6 * (1.0 + std::abs(out.value));
  std::vector<Maximizer> cand;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].value >= out.value - cluster_tol) {
      cand.push_back({results[i].y, starts[i].l, results[i].value});
    }
  }
  std::stable_sort(cand.begin(), cand.end(), [](const Maximizer& a, const Maximizer& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.objective != b.objective) return a.objective < b.objective;
    return lex_less(a.y, b.y);
  });
  for (auto& c : cand) {
    bool dup = false;
    for (const auto& kept : out.maximizers) {
      if (kept.objective == c.objective && dist2(kept.y, c.y) <= merge2) {
        dup = true;
        break;
      }
    }
    if (!dup) out.maximizers.push_back(std::move(c));
  }
  return out;
}

SupEvaluation sup_value(const ParametricSystem& sys, std::span<const double> x, std::size_t budget,
                        std::uint64_t seed) {
  CompiledSystem cs(sys);
  SupOptions opt;
  opt.budget = budget;
  opt.seed = seed;
  return sup_value(cs, x, opt);
}

std::vector<FJPoint> fj_multipliers(const CompiledSystem& cs, std::span<const double> x, std::span<const double> y,
                                    std::size_t l, double tol) {
  const ParametricSystem& sys = *cs.sys;
  if (l >= sys.L) throw ArgumentError("fj_multipliers: objective index out of range");
  if (!membership(sys.Y, x, y, tol)) throw ArgumentError("fj_multipliers: y is not feasible");
  const auto xy = join_xy(x, y);
  const auto m = static_cast<Eigen::Index>(sys.m);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < cs.set.g.size(); ++i) {
    if (cs.set.g[i].value(xy) >= -tol) active.push_back(i);
  }
  if (active.size() > 12) throw ArgumentError("fj_multipliers: more than 12 active inequalities");
  const std::size_t s = cs.set.h.size();
  const auto a = static_cast<Eigen::Index>(active.size());
  const Eigen::Index k = 1 + a + 2 * static_cast<Eigen::Index>(s);
  Mat cols(m, k);
  cols.col(0) = -cs.f[l].gy(xy);
  for (Eigen::Index i = 0; i < a; ++i) cols.col(1 + i) = cs.set.g[active[static_cast<std::size_t>(i)]].gy(xy);
  std::vector<std::pair<int, int>> exclusive;
  for (std::size_t j = 0; j < s; ++j) {
    const auto plus = 1 + a + static_cast<Eigen::Index>(j);
    const auto minus = plus + static_cast<Eigen::Index>(s);
    cols.col(plus) = cs.set.h[j].gy(xy);
    cols.col(minus) = -cols.col(plus);
    exclusive.emplace_back(static_cast<int>(plus), static_cast<int>(minus));
  }
  std::vector<FJPoint> out;
  for (const auto& v : cone_simplex_vertices(cols, exclusive, tol)) {
    FJPoint p;
    p.gamma = v.u(0);
    p.lambda.assign(cs.set.g.size(), 0.0);
    for (Eigen::Index i = 0; i < a; ++i) p.lambda[active[static_cast<std::size_t>(i)]] = v.u(1 + i);
    p.kappa.assign(s, 0.0);
    for (std::size_t j = 0; j < s; ++j) {
      const auto plus = 1 + a + static_cast<Eigen::Index>(j);
      p.kappa[j] = v.u(plus) - v.u(plus + static_cast<Eigen::Index>(s));
    }
    p.normalization = p.gamma;
    for (double lam : p.lambda) p.normalization += lam;
    for (double kap : p.kappa) p.normalization += std::abs(kap);
    Vec st = p.gamma * cols.col(0);
    for (std::size_t i = 0; i < p.lambda.size(); ++i) {
      if (p.lambda[i] != 0.0) st += p.lambda[i] * cs.set.g[i].gy(xy);
    }
    for (std::size_t j = 0; j < s; ++j) st += p.kappa[j] * cs.set.h[j].gy(xy);
    p.stationarity = st.norm();
    for (std::size_t i = 0; i < p.lambda.size(); ++i) {
      p.complementarity = std::max(p.complementarity, std::abs(p.lambda[i] * cs.set.g[i].value(xy)));
    }
    if (std::abs(p.normalization - 1.0) > 1e-10 || p.stationarity > tol || p.complementarity > tol) continue;
    out.push_back(std::move(p));
  }
  if (out.empty()) throw SolverError("numerical FJ failure");
  return out;
}

std::vector<FJPoint> fj_multipliers(const ParametricSystem& sys, std::span<const double> x, std::span<const double> y,
                                    std::size_t l, double tol) {
  CompiledSystem cs(sys);
  return fj_multipliers(cs, x, y, l, tol);
}

std::vector<double> lagrangian_x_gradient(const CompiledSystem& cs, std::span<const double> x,
                                          std::span<const double> y, std::size_t l, const FJPoint& fj) {
  const auto xy = join_xy(x, y);
  Vec v = fj.gamma * cs.f[l].gx(xy);
  for (std::size_t i = 0; i < fj.lambda.size(); ++i) {
    if (fj.lambda[i] != 0.0) v -= fj.lambda[i] * cs.set.g[i].gx(xy);
  }
  for (std::size_t j = 0; j < fj.kappa.size(); ++j) {
    if (fj.kappa[j] != 0.0) v -= fj.kappa[j] * cs.set.h[j].gx(xy);
  }
  return to_std(v);
}

namespace {

FJPoint scaled(const FJPoint& p, double factor) {
  FJPoint q = p;
  q.gamma *= factor;
  for (double& v : q.lambda) v *= factor;
  for (double& v : q.kappa) v *= factor;
  q.normalization *= factor;
  return q;
}

}  // namespace

SubdifferentialHull subdifferential_hull(const CompiledSystem& cs, std::span<const double> x, double alpha_cap,
                                         const SupOptions& opt) {
  if (!(alpha_cap > 0)) throw ArgumentError("alpha_cap must be positive");
  SupEvaluation sup = sup_value(cs, x, opt);
  SubdifferentialHull hull;
  hull.alpha_cap = alpha_cap;
  hull.maximizers = sup.maximizers;

  struct Single {
    std::size_t maximizer;
    FJPoint fj;
    Vec v;
  };
  std::vector<Single> singles;
  for (std::size_t q = 0; q < sup.maximizers.size(); ++q) {
    const auto& mx = sup.maximizers[q];
    for (const auto& fj : fj_multipliers(cs, x, mx.y, mx.objective)) {
      if (fj.gamma <= 1e-12) {
        ++hull.degenerate_skipped;
        continue;
      }
      FJPoint one = scaled(fj, 1.0 / fj.gamma);
      if (one.normalization > alpha_cap) {
        ++hull.alpha_violations;
        continue;
      }
      Vec v = to_vec(lagrangian_x_gradient(cs, x, mx.y, mx.objective, one));
      singles.push_back({q, one, v});
    }
  }
  if (singles.empty()) {
    throw SolverError("no Fritz-John point with positive gamma within alpha_cap");
  }
  for (const auto& s : singles) hull.generators.push_back({to_std(s.v), {{s.maximizer, s.fj}}, 1.0});
  if (singles.size() <= 50) {
    for (std::size_t a = 0; a < singles.size(); ++a) {
      for (std::size_t b = a + 1; b < singles.size(); ++b) {
        if (singles[a].maximizer == singles[b].maximizer) continue;
        for (double w : {0.25, 0.5, 0.75}) {
          HullGenerator g;
          g.v = to_std(w * singles[a].v + (1.0 - w) * singles[b].v);
          g.provenance = {{singles[a].maximizer, scaled(singles[a].fj, w)},
                          {singles[b].maximizer, scaled(singles[b].fj, 1.0 - w)}};
          g.gamma_total = w + (1.0 - w);
          hull.generators.push_back(std::move(g));
        }
      }
    }
  }
  return hull;
}

SubdifferentialHull subdifferential_hull(const ParametricSystem& sys, std::span<const double> x, double alpha_cap,
                                         std::size_t budget, std::uint64_t seed) {
  CompiledSystem cs(sys);
  SupOptions opt;
  opt.budget = budget;
  opt.seed = seed;
  return subdifferential_hull(cs, x, alpha_cap, opt);
}

SlopeResult slope_detail(const CompiledSystem& cs, std::span<const double> x, double alpha_cap,
                         const SupOptions& opt) {
  SlopeResult out;
  out.hull = subdifferential_hull(cs, x, alpha_cap, opt);
  std::vector<Vec> pts;
  for (const auto& g : out.hull.generators) pts.push_back(to_vec(g.v));
  MinNormResult mn = wolfe_min_norm(pts);
  out.min_norm = to_std(mn.point);
  out.slope = mn.point.norm();
  out.phi = -std::numeric_limits<double>::infinity();
  for (const auto& mx : out.hull.maximizers) out.phi = std::max(out.phi, mx.value);
  return out;
}

double slope(const ParametricSystem& sys, std::span<const double> x, std::size_t budget, std::uint64_t seed) {
  CompiledSystem cs(sys);
  SupOptions opt;
  opt.budget = budget;
  opt.seed = seed;
  return slope_detail(cs, x, kDefaultAlphaCap, opt).slope;
}

}  // namespace polyeb
