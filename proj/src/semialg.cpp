#include "polyeb/semialg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "polyeb/compiled.hpp"
#include "polyeb/errors.hpp"
#include "polyeb/linalg.hpp"
#include "polyeb/min_norm.hpp"
#include "polyeb/parallel.hpp"

namespace polyeb {

Box::Box(std::vector<double> lo, std::vector<double> hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size()) throw ArgumentError("box bounds differ in length");
}

Box Box::cube(std::size_t dim, double lo, double hi) {
  return Box(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

bool Box::contains(std::span<const double> p, double tol) const {
  if (p.size() != dim()) throw ArgumentError("box membership: dimension mismatch");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= lower[i] - tol && p[i] <= upper[i] + tol)) return false;
  }
  return true;
}

double Box::diameter() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += (upper[i] - lower[i]) * (upper[i] - lower[i]);
  return std::sqrt(s);
}

void Box::validate(const std::string& field) const {
  if (lower.size() != upper.size()) throw ArgumentError(field + ": bounds differ in length");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
      throw ArgumentError(field + "[" + std::to_string(i) + "]: bounds must be finite");
    }
    if (!(lower[i] < upper[i])) {
      throw ArgumentError(field + "[" + std::to_string(i) + "]: lower bound must be below upper bound");
    }
  }
}

bool ParameterSetDescription::x_independent() const {
  for (const auto* list : {&ineqs, &eqs}) {
    for (const auto& p : *list) {
      for (std::size_t i = 0; i < n; ++i) {
        if (p.depends_on(i)) return false;
      }
    }
  }
  return true;
}

void ParameterSetDescription::validate() const {
  const std::size_t nv = n + m;
  for (std::size_t i = 0; i < ineqs.size(); ++i) {
    if (ineqs[i].num_vars() != nv) {
      throw ArgumentError("Y.ineq[" + std::to_string(i) + "]: expected " + std::to_string(nv) + " variables");
    }
  }
  for (std::size_t j = 0; j < eqs.size(); ++j) {
    if (eqs[j].num_vars() != nv) {
      throw ArgumentError("Y.eq[" + std::to_string(j) + "]: expected " + std::to_string(nv) + " variables");
    }
  }
  if (box.dim() != m) throw ArgumentError("Y.box: expected " + std::to_string(m) + " intervals");
  box.validate("Y.box");
}

void ParametricSystem::validate() const {
  if (n < 1) throw ArgumentError("n: must be at least 1");
  if (m < 1) throw ArgumentError("m: must be at least 1");
  if (L < 1) throw ArgumentError("L: must be at least 1");
  if (d < 1) throw ArgumentError("d: must be at least 1");
  if (objectives.size() != L) {
    throw ArgumentError("objectives: expected L = " + std::to_string(L) + " polynomials, got " +
                        std::to_string(objectives.size()));
  }
  if (Y.n != n || Y.m != m) throw ArgumentError("Y: dimensions disagree with n, m");
  Y.validate();
  for (std::size_t l = 0; l < objectives.size(); ++l) {
    const auto& f = objectives[l];
    if (f.num_vars() != n + m) {
      throw ArgumentError("objectives[" + std::to_string(l) + "]: expected " + std::to_string(n + m) +
                          " variables");
    }
    if (f.degree() > d) {
      throw ArgumentError("objectives[" + std::to_string(l) + "]: degree " + std::to_string(f.degree()) +
                          " exceeds d = " + std::to_string(d));
    }
  }
  for (std::size_t i = 0; i < Y.ineqs.size(); ++i) {
    if (Y.ineqs[i].degree() > d) {
      throw ArgumentError("Y.ineq[" + std::to_string(i) + "]: degree exceeds d = " + std::to_string(d));
    }
  }
  for (std::size_t j = 0; j < Y.eqs.size(); ++j) {
    if (Y.eqs[j].degree() > d) {
      throw ArgumentError("Y.eq[" + std::to_string(j) + "]: degree exceeds d = " + std::to_string(d));
    }
  }
  if (x_box.dim() != n) throw ArgumentError("x_box: expected " + std::to_string(n) + " intervals");
  x_box.validate("x_box");
}

std::vector<double> join_xy(std::span<const double> x, std::span<const double> y) {
  std::vector<double> xy(x.begin(), x.end());
  xy.insert(xy.end(), y.begin(), y.end());
  return xy;
}

bool membership(const ParameterSetDescription& Y, std::span<const double> x, std::span<const double> y,
                double tol) {
  if (tol < 0) throw ArgumentError("membership tolerance must be nonnegative");
  if (x.size() != Y.n || y.size() != Y.m) throw ArgumentError("membership: dimension mismatch");
  if (!Y.box.contains(y, tol)) return false;
  const auto xy = join_xy(x, y);
  for (const auto& g : Y.ineqs) {
    if (!(g.eval(xy) <= tol)) return false;
  }
  for (const auto& h : Y.eqs) {
    if (!(std::abs(h.eval(xy)) <= tol)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

CompiledPoly::CompiledPoly(const Polynomial& poly, std::size_t n, std::size_t m) : p(poly) {
  grad_x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) grad_x.push_back(p.partial(i));
  grad_y.reserve(m);
  for (std::size_t k = 0; k < m; ++k) grad_y.push_back(p.partial(n + k));
  hess_y.resize(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      hess_y[a * m + b] = grad_y[a].partial(n + b);
      hess_y[b * m + a] = hess_y[a * m + b];
    }
  }
}

Vec CompiledPoly::gy(std::span<const double> xy) const {
  Vec g(static_cast<Eigen::Index>(grad_y.size()));
  for (std::size_t k = 0; k < grad_y.size(); ++k) g(static_cast<Eigen::Index>(k)) = grad_y[k].eval(xy);
  return g;
}

Vec CompiledPoly::gx(std::span<const double> xy) const {
  Vec g(static_cast<Eigen::Index>(grad_x.size()));
  for (std::size_t k = 0; k < grad_x.size(); ++k) g(static_cast<Eigen::Index>(k)) = grad_x[k].eval(xy);
  return g;
}

Mat CompiledPoly::hy(std::span<const double> xy) const {
  const auto m = static_cast<Eigen::Index>(grad_y.size());
  Mat h(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) h(a, b) = hess_y[static_cast<std::size_t>(a * m + b)].eval(xy);
  return h;
}

CompiledSet::CompiledSet(const ParameterSetDescription& Y) : desc(&Y) {
  for (const auto& g_i : Y.ineqs) g.emplace_back(g_i, Y.n, Y.m);
  for (const auto& h_j : Y.eqs) h.emplace_back(h_j, Y.n, Y.m);
}

CompiledSystem::CompiledSystem(const ParametricSystem& s) : sys(&s), set(s.Y) {
  for (const auto& f_l : s.objectives) f.emplace_back(f_l, s.n, s.m);
}

// ---------------------------------------------------------------------------

double restore_feasibility(const CompiledSet& cs, std::span<const double> x, std::vector<double>& y,
                           int max_iter, bool include_violated_ineqs) {
  const auto m = static_cast<Eigen::Index>(cs.m());
  auto residuals = [&](std::vector<const CompiledPoly*>* rows) {
    const auto xy = join_xy(x, y);
    std::vector<double> c;
    if (rows) rows->clear();
    for (const auto& h : cs.h) {
      c.push_back(h.value(xy));
      if (rows) rows->push_back(&h);
    }
    if (include_violated_ineqs) {
      for (const auto& g : cs.g) {
        const double v = g.value(xy);
        if (v > 0) {
          c.push_back(v);
          if (rows) rows->push_back(&g);
        }
      }
    }
    return c;
  };
  auto sup_norm = [](const std::vector<double>& c) {
    double r = 0.0;
    for (double v : c) r = std::max(r, std::abs(v));
    return r;
  };

  std::vector<const CompiledPoly*> rows;
  for (int it = 0; it < max_iter; ++it) {
    auto c = residuals(&rows);
    if (c.empty() || sup_norm(c) <= 1e-14) break;
    const auto xy = join_xy(x, y);
    Mat J(static_cast<Eigen::Index>(rows.size()), m);
    for (std::size_t i = 0; i < rows.size(); ++i) J.row(static_cast<Eigen::Index>(i)) = rows[i]->gy(xy).transpose();
    Vec step = lstsq(J, to_vec(c));
    if (!step.allFinite() || step.norm() == 0.0) break;
    for (Eigen::Index k = 0; k < m; ++k) y[static_cast<std::size_t>(k)] -= step(k);
  }
  return sup_norm(residuals(nullptr));
}

double restore_feasibility(const ParameterSetDescription& Y, std::span<const double> x, std::vector<double>& y,
                           int max_iter, bool include_violated_ineqs) {
  CompiledSet cs(Y);
  return restore_feasibility(cs, x, y, max_iter, include_violated_ineqs);
}

std::size_t grid_points_per_axis(std::size_t budget, std::size_t dim) {
  if (dim == 0) return 1;
  std::size_t k = 1;
  for (;;) {
    std::size_t next = k + 1;
    std::size_t total = 1;
    bool over = false;
    for (std::size_t i = 0; i < dim; ++i) {
      total *= next;
      if (total > budget) {
        over = true;
        break;
      }
    }
    if (over) return k;
    k = next;
  }
}

std::vector<double> grid_point(const Box& box, std::size_t k, std::size_t index) {
  std::vector<double> p(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const std::size_t j = index % k;
    index /= k;
    p[i] = k == 1 ? 0.5 * (box.lower[i] + box.upper[i])
                  : box.lower[i] + (box.upper[i] - box.lower[i]) * static_cast<double>(j) /
                                       static_cast<double>(k - 1);
  }
  return p;
}

std::vector<std::vector<double>> sample_parameter_set(const CompiledSet& cs, std::span<const double> x,
                                                      std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw ArgumentError("sample budget must be at least 1");
  const ParameterSetDescription& Y = *cs.desc;
  if (x.size() != Y.n) throw ArgumentError("sample_parameter_set: x has wrong dimension");
  const std::size_t k = grid_points_per_axis(budget, Y.m);
  std::size_t grid_total = 1;
  for (std::size_t i = 0; i < Y.m; ++i) grid_total *= k;

  std::vector<std::vector<double>> candidates(budget);
  std::vector<char> keep(budget, 0);
  parallel_for(budget, [&](std::size_t idx) {
    std::vector<double> y;
    if (idx < grid_total) {
      y = grid_point(Y.box, k, idx);
    } else {
      auto rng = task_rng(seed, idx);
      y.resize(Y.m);
      for (std::size_t i = 0; i < Y.m; ++i) {
        std::uniform_real_distribution<double> u(Y.box.lower[i], Y.box.upper[i]);
        y[i] = u(rng);
      }
    }
    if (!cs.h.empty()) {
      if (restore_feasibility(cs, x, y, 30, false) > 1e-10) return;
    }
    if (membership(Y, x, y, kMembershipTol)) {
      candidates[idx] = std::move(y);
      keep[idx] = 1;
    }
  });
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < budget; ++i) {
    if (keep[i]) out.push_back(std::move(candidates[i]));
  }
  return out;
}

std::vector<std::vector<double>> sample_parameter_set(const ParameterSetDescription& Y,
                                                      std::span<const double> x, std::size_t budget,
                                                      std::uint64_t seed) {
  CompiledSet cs(Y);
  return sample_parameter_set(cs, x, budget, seed);
}

// ---------------------------------------------------------------------------

CQCertificate check_mfcq(const ParameterSetDescription& Y, std::span<const double> y, double tol) {
  if (!Y.x_independent()) throw ArgumentError("check_mfcq: constraints must not depend on x");
  const std::vector<double> x(Y.n, 0.0);
  if (!membership(Y, x, y, tol)) throw ArgumentError("check_mfcq: y is not feasible");
  CompiledSet cs(Y);
  const auto xy = join_xy(x, y);
  const auto m = static_cast<Eigen::Index>(Y.m);

  CQCertificate cert;
  cert.tol = tol;
  cert.samples_used = 1;
  double margin = std::numeric_limits<double>::infinity();

  Mat jt(m, static_cast<Eigen::Index>(cs.h.size()));
  for (std::size_t j = 0; j < cs.h.size(); ++j) jt.col(static_cast<Eigen::Index>(j)) = cs.h[j].gy(xy);
  if (!cs.h.empty()) {
    double sigma_min = 0.0;
    if (cs.h.size() <= Y.m) {
      Vec sv = singular_values(jt);
      sigma_min = sv(sv.size() - 1);
    }
    margin = std::min(margin, sigma_min);
    cert.note = "equality rank margin " + std::to_string(sigma_min);
  }

  std::vector<Vec> active;
  for (const auto& g : cs.g) {
    if (g.value(xy) >= -tol) active.push_back(g.gy(xy));
  }
  if (active.size() > 12) throw ArgumentError("check_mfcq: more than 12 active inequalities");
  if (!active.empty()) {
    Mat q = column_basis(jt);
    for (auto& a : active) a -= q * (q.transpose() * a);
    MinNormResult mn = wolfe_min_norm(active);
    margin = std::min(margin, mn.point.norm());
    cert.witness = to_std(mn.point);
  }
  cert.margin = margin;
  cert.holds = margin > tol;
  if (cs.h.empty() && active.empty()) cert.note = "no active constraints; holds vacuously";
  return cert;
}

CQCertificate check_mmfcq(const ParametricSystem& sys, std::span<const double> xbar,
                          const std::vector<std::vector<double>>& argmax_points, double tol) {
  if (argmax_points.empty()) throw ArgumentError("check_mmfcq: argmax point list is empty");
  if (xbar.size() != sys.n) throw ArgumentError("check_mmfcq: x has wrong dimension");
  CompiledSet cs(sys.Y);
  const auto m = static_cast<Eigen::Index>(sys.m);
  const std::size_t s = cs.h.size();
  if (s > 6) throw ArgumentError("check_mmfcq: at most 6 equalities supported");

  std::vector<Vec> w;
  for (const auto& y : argmax_points) {
    if (!membership(sys.Y, xbar, y, tol)) throw ArgumentError("check_mmfcq: argmax point is infeasible");
    const auto xy = join_xy(xbar, y);
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < cs.g.size(); ++i) {
      if (cs.g[i].value(xy) >= -tol) active.push_back(i);
    }
    if (active.size() > 6) throw ArgumentError("check_mmfcq: at most 6 active inequalities supported");
    const auto a = static_cast<Eigen::Index>(active.size());
    const auto k = a + 2 * static_cast<Eigen::Index>(s);
    if (k == 0) continue;
    Mat cols(m, k);
    Mat xcols(static_cast<Eigen::Index>(sys.n), k);
    for (Eigen::Index i = 0; i < a; ++i) {
      cols.col(i) = cs.g[active[static_cast<std::size_t>(i)]].gy(xy);
      xcols.col(i) = cs.g[active[static_cast<std::size_t>(i)]].gx(xy);
    }
    std::vector<std::pair<int, int>> exclusive;
    for (std::size_t j = 0; j < s; ++j) {
      const auto plus = a + static_cast<Eigen::Index>(j);
      const auto minus = a + static_cast<Eigen::Index>(s + j);
      cols.col(plus) = cs.h[j].gy(xy);
      cols.col(minus) = -cols.col(plus);
      xcols.col(plus) = cs.h[j].gx(xy);
      xcols.col(minus) = -xcols.col(plus);
      exclusive.emplace_back(static_cast<int>(plus), static_cast<int>(minus));
    }
    for (const auto& v : cone_simplex_vertices(cols, exclusive, 1e-9)) w.push_back(xcols * v.u);
  }

  CQCertificate cert;
  cert.tol = tol;
  cert.samples_used = argmax_points.size();
  if (w.empty()) {
    cert.holds = true;
    cert.margin = std::numeric_limits<double>::infinity();
    cert.note = "no degenerate multipliers; holds vacuously (certified at samples)";
    return cert;
  }
  MarginLP lp = max_margin_direction(w);
  cert.margin = lp.delta;
  cert.witness = to_std(lp.xi);
  cert.holds = lp.delta > tol;
  cert.note = "certified at samples; " + std::to_string(w.size()) + " degenerate multiplier rays";
  return cert;
}

}  // namespace polyeb
