#include "polyeb/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "polyeb/errors.hpp"
#include "polyeb/linalg.hpp"
#include "polyeb/parallel.hpp"
#include "polyeb/symmetric_eigen.hpp"

namespace polyeb {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm(std::span<const double> v) {
  double s = 0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct SmoothModel {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
};

// Top eigenpairs of P(x) plus the first and second entry derivatives.
struct PmiEval {
  double lambda = 0.0;
  Vec grad;
  Mat hess;
};

PmiEval pmi_eval(const MatrixPolynomial& P, const Vec& x, bool want_hess) {
  const std::size_t n = P.num_vars(), m = P.size();
  const auto xs = to_std(x);
  const auto dec = jacobi_eigen(P.eval_matrix(xs));
  const double top = dec.values(0);
  std::vector<Eigen::Index> tied;
  for (Eigen::Index k = 0; k < dec.values.size(); ++k) {
    if (top - dec.values(k) <= 1e-10) tied.push_back(k);
  }
  // ∂_k P(x) as dense matrices
  std::vector<Mat> dP(n, Mat::Zero(m, m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const Polynomial& e = P.entry(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        const double v = e.partial(k).eval(xs);
        dP[k](i, j) = v;
        dP[k](j, i) = v;
      }
    }
  }
  PmiEval out;
  out.lambda = top;
  out.grad = Vec::Zero(n);
  for (auto t : tied) {
    const Vec v = dec.vectors.col(t);
    for (std::size_t k = 0; k < n; ++k) out.grad(k) += v.dot(dP[k] * v);
  }
  out.grad /= static_cast<double>(tied.size());
  if (!want_hess) return out;
  out.hess = Mat::Zero(n, n);
  for (auto t : tied) {
    const Vec v = dec.vectors.col(t);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        const double w = (i == j ? 1.0 : 2.0) * v(i) * v(j);
        if (w == 0.0) continue;
        const auto H = P.entry(i, j).hessian();
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) out.hess(a, b) += w * H[a * n + b].eval(xs);
        }
      }
    }
  }
  out.hess /= static_cast<double>(tied.size());
  if (tied.size() == 1) {
    // eigenvector curvature term for a simple top eigenvalue
    const Vec v = dec.vectors.col(0);
    for (Eigen::Index k = 1; k < dec.values.size(); ++k) {
      const double gap = top - dec.values(k);
      const Vec u = dec.vectors.col(k);
      Vec c(n);
      for (std::size_t a = 0; a < n; ++a) c(a) = u.dot(dP[a] * v);
      out.hess += 2.0 / gap * c * c.transpose();
    }
  }
  return out;
}

SmoothModel model_for(const ConvexSet& c) {
  return std::visit(
      overloaded{
          [](const Sublevel& s) {
            const std::size_t n = s.g.num_vars();
            auto grad = std::make_shared<std::vector<Polynomial>>(s.g.gradient());
            auto hess = std::make_shared<std::vector<Polynomial>>(s.g.hessian());
            const Polynomial g = s.g;
            SmoothModel mdl;
            mdl.value = [g](const Vec& x) { return g.eval(to_std(x)); };
            mdl.grad = [grad, n](const Vec& x) {
              const auto xs = to_std(x);
              Vec out(n);
              for (std::size_t i = 0; i < n; ++i) out(i) = (*grad)[i].eval(xs);
              return out;
            };
            mdl.hess = [hess, n](const Vec& x) {
              const auto xs = to_std(x);
              Mat out(n, n);
              for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) out(i, j) = (*hess)[i * n + j].eval(xs);
              }
              return out;
            };
            return mdl;
          },
          [](const PmiSet& s) {
            const MatrixPolynomial P = s.P;
            SmoothModel mdl;
            mdl.value = [P](const Vec& x) { return lambda_max(P.eval_matrix(to_std(x))).first; };
            mdl.grad = [P](const Vec& x) { return pmi_eval(P, x, false).grad; };
            mdl.hess = [P](const Vec& x) { return pmi_eval(P, x, true).hess; };
            return mdl;
          },
          [](const auto&) -> SmoothModel { throw ArgumentError("no smooth model for this set kind"); },
      },
      c.shape);
}

// Newton on x − x0 + μ∇g(x) = 0, g(x) = 0 with backtracking on the residual norm.
std::vector<double> kkt_project(const SmoothModel& mdl, const Vec& x0, double tol) {
  const Eigen::Index n = x0.size();
  Vec x = x0;
  double mu = 0.0;
  auto residual = [&](const Vec& z, double mu_z, Vec& r) {
    const Vec g = mdl.grad(z);
    r.resize(n + 1);
    r.head(n) = z - x0 + mu_z * g;
    r(n) = mdl.value(z);
    return r.lpNorm<Eigen::Infinity>();
  };
  Vec r;
  double res = residual(x, mu, r);
  for (int it = 0; it < kProjectionMaxIter; ++it) {
    if (res <= tol * std::max(1.0, x0.norm())) return to_std(x);
    const Vec g = mdl.grad(x);
    Mat J = Mat::Zero(n + 1, n + 1);
    J.topLeftCorner(n, n) = Mat::Identity(n, n) + std::max(mu, 0.0) * mdl.hess(x);
    J.topRightCorner(n, 1) = g;
    J.bottomLeftCorner(1, n) = g.transpose();
    const Vec step = -lstsq(J, r);
    double alpha = 1.0;
    bool accepted = false;
    Vec trial_r;
    for (int bt = 0; bt < 40; ++bt) {
      const Vec xt = x + alpha * step.head(n);
      const double mt = mu + alpha * step(n);
      const double rt = residual(xt, mt, trial_r);
      if (std::isfinite(rt) && rt <= (1.0 - 1e-4 * alpha) * res) {
        x = xt;
        mu = mt;
        res = rt;
        r = trial_r;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (res <= 1e3 * tol * std::max(1.0, x0.norm())) return to_std(x);
      throw SolverError("projection: line search failed", res);
    }
  }
  throw SolverError("projection: Newton did not converge in " + std::to_string(kProjectionMaxIter) +
                        " iterations",
                    res);
}

// Projection onto {λ_max(P(x)) ≤ 0} when the top eigenvalue may be repeated at
// the solution. For each candidate cluster size k the constraint is modelled
// as UᵀP(x)U = 0 on the top-k eigenvectors U, with a symmetric multiplier Λ ⪰ 0
// (SQP step). The cluster size with the smallest KKT residual after the step wins.
class ClusterProjector {
 public:
  ClusterProjector(const MatrixPolynomial& P, const Vec& x0) : P_(P), x0_(x0), n_(x0.size()), m_(P.size()) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = i; j < m_; ++j) {
        grads_.push_back(P.entry(i, j).gradient());
        hess_.push_back(P.entry(i, j).hessian());
      }
    }
  }

  std::vector<double> run(Vec x, double tol) {
    const double scale = std::max(1.0, x0_.norm());
    double res = best_residual(x).first;
    for (int it = 0; it < kProjectionMaxIter; ++it) {
      if (res <= tol * scale) return to_std(x);
      const State st = state(x);
      bool moved = false;
      for (double alpha = 1.0; alpha > 1e-12 && !moved; alpha *= 0.5) {
        double best = res;
        Vec best_x;
        for (std::size_t k = 1; k <= m_; ++k) {
          Vec step;
          if (!sqp_step(st, k, step)) continue;
          const Vec xt = x + alpha * step;
          const double rt = best_residual(xt).first;
          if (std::isfinite(rt) && rt < best) {
            best = rt;
            best_x = xt;
          }
        }
        if (best < (1.0 - 1e-4 * alpha) * res) {
          x = best_x;
          res = best;
          moved = true;
        }
      }
      if (!moved) {
        if (res <= 1e3 * tol * scale) return to_std(x);
        throw SolverError("projection: cluster line search failed", res);
      }
    }
    throw SolverError("projection: cluster Newton did not converge", res);
  }

 private:
  struct State {
    Vec x;
    EigenDecomposition eig;
    std::vector<Mat> dP;  // ∂_a P(x)
  };

  State state(const Vec& x) const {
    State st;
    st.x = x;
    const auto xs = to_std(x);
    st.eig = jacobi_eigen(P_.eval_matrix(xs));
    st.dP.assign(n_, Mat::Zero(m_, m_));
    std::size_t idx = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = i; j < m_; ++j, ++idx) {
        for (Eigen::Index a = 0; a < n_; ++a) {
          const double v = grads_[idx][a].eval(xs);
          st.dP[a](i, j) = v;
          st.dP[a](j, i) = v;
        }
      }
    }
    return st;
  }

  static std::size_t tri(std::size_t k) { return k * (k + 1) / 2; }

  // rows of B: upper-triangle entries of Uᵀ ∂_a P U, one column per a
  Mat constraint_jacobian(const State& st, std::size_t k) const {
    const Mat U = st.eig.vectors.leftCols(static_cast<Eigen::Index>(k));
    Mat B(static_cast<Eigen::Index>(tri(k)), n_);
    for (Eigen::Index a = 0; a < n_; ++a) {
      const Mat A = U.transpose() * st.dP[a] * U;
      Eigen::Index r = 0;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) B(r++, a) = A(i, j);
      }
    }
    return B;
  }

  // ⟨Λ, UᵀAU⟩ with Λ stored as upper-triangle coefficients of (i,j) pairs
  static Mat unpack(const Vec& lam, std::size_t k) {
    Mat L = Mat::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j, ++r) {
        if (i == j) {
          L(i, j) = lam(r);
        } else {
          L(i, j) = L(j, i) = 0.5 * lam(r);
        }
      }
    }
    return L;
  }

  // least-squares multipliers and KKT residual for cluster size k
  double residual(const State& st, std::size_t k) const {
    const Mat B = constraint_jacobian(st, k);
    const Vec g = st.x - x0_;
    const Vec lam = lstsq(B.transpose(), -g);
    const Vec stat = g + B.transpose() * lam;
    double r = stat.lpNorm<Eigen::Infinity>();
    for (std::size_t i = 0; i < k; ++i) r = std::max(r, std::abs(st.eig.values(static_cast<Eigen::Index>(i))));
    r = std::max(r, std::max(st.eig.values(0), 0.0));
    const Eigen::SelfAdjointEigenSolver<Mat> es(unpack(lam, k));
    r = std::max(r, std::max(-es.eigenvalues().minCoeff(), 0.0));
    return r;
  }

  std::pair<double, std::size_t> best_residual(const Vec& x) const {
    const State st = state(x);
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 1;
    for (std::size_t k = 1; k <= m_; ++k) {
      const double r = residual(st, k);
      if (r < best) {
        best = r;
        arg = k;
      }
    }
    return {best, arg};
  }

  bool sqp_step(const State& st, std::size_t k, Vec& step) const {
    const auto xs = to_std(st.x);
    const Mat B = constraint_jacobian(st, k);
    const Vec g = st.x - x0_;
    const Vec lam = lstsq(B.transpose(), -g);
    const Mat L = unpack(lam, k);
    const Mat U = st.eig.vectors.leftCols(static_cast<Eigen::Index>(k));
    // Hessian of the Lagrangian: entry Hessians weighted by U Λ Uᵀ plus eigenvector curvature
    Mat H = Mat::Identity(n_, n_);
    const Mat W = U * L * U.transpose();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = i; j < m_; ++j, ++idx) {
        const double w = (i == j ? 1.0 : 2.0) * W(i, j);
        if (w == 0.0) continue;
        for (Eigen::Index a = 0; a < n_; ++a) {
          for (Eigen::Index b = 0; b < n_; ++b) H(a, b) += w * hess_[idx][a * n_ + b].eval(xs);
        }
      }
    }
    double lbar = 0;
    for (std::size_t i = 0; i < k; ++i) lbar += st.eig.values(static_cast<Eigen::Index>(i));
    lbar /= static_cast<double>(k);
    for (Eigen::Index l = static_cast<Eigen::Index>(k); l < st.eig.values.size(); ++l) {
      const double gap = lbar - st.eig.values(l);
      if (gap <= 1e-12) return false;
      const Vec w = st.eig.vectors.col(l);
      Mat C(n_, static_cast<Eigen::Index>(k));
      for (Eigen::Index a = 0; a < n_; ++a) C.row(a) = (w.transpose() * st.dP[a] * U);
      H += 2.0 / gap * C * L * C.transpose();
    }
    const Eigen::Index nc = static_cast<Eigen::Index>(tri(k));
    Mat K = Mat::Zero(n_ + nc, n_ + nc);
    K.topLeftCorner(n_, n_) = H;
    K.topRightCorner(n_, nc) = B.transpose();
    K.bottomLeftCorner(nc, n_) = B;
    Vec rhs(n_ + nc);
    rhs.head(n_) = -g;
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) {
        rhs(n_ + r++) = -(i == j ? st.eig.values(static_cast<Eigen::Index>(i)) : 0.0);
      }
    }
    const Vec sol = lstsq(K, rhs);
    if (!sol.allFinite()) return false;
    step = sol.head(n_);
    return true;
  }

  const MatrixPolynomial& P_;
  Vec x0_;
  Eigen::Index n_;
  std::size_t m_;
  std::vector<std::vector<Polynomial>> grads_;
  std::vector<std::vector<Polynomial>> hess_;
};

}  // namespace

std::size_t ConvexSet::dim() const {
  return std::visit(overloaded{
                        [](const Halfspace& h) { return h.a.size(); },
                        [](const Ball& b) { return b.center.size(); },
                        [](const Sublevel& s) { return s.g.num_vars(); },
                        [](const PmiSet& p) { return p.P.num_vars(); },
                    },
                    shape);
}

std::string ConvexSet::kind() const {
  return std::visit(overloaded{
                        [](const Halfspace&) { return std::string("halfspace"); },
                        [](const Ball&) { return std::string("ball"); },
                        [](const Sublevel&) { return std::string("sublevel"); },
                        [](const PmiSet&) { return std::string("pmi"); },
                    },
                    shape);
}

void ConvexSet::validate() const {
  std::visit(overloaded{
                 [](const Halfspace& h) {
                   if (h.a.empty() || norm(h.a) == 0.0) throw ArgumentError("halfspace: a must be nonzero");
                 },
                 [](const Ball& b) {
                   if (b.center.empty()) throw ArgumentError("ball: empty center");
                   if (!(b.radius > 0)) throw ArgumentError("ball: radius must be positive");
                 },
                 [](const Sublevel& s) {
                   if (s.g.num_vars() == 0) throw ArgumentError("sublevel: polynomial has no variables");
                 },
                 [](const PmiSet& p) {
                   if (p.P.size() == 0 || p.P.num_vars() == 0) throw ArgumentError("pmi: empty matrix polynomial");
                 },
             },
             shape);
}

bool ConvexSet::declared_convex() const {
  if (const auto* p = std::get_if<PmiSet>(&shape)) return p->convex_declared;
  return true;
}

double ConvexSet::value(std::span<const double> x) const {
  if (x.size() != dim()) throw ArgumentError("convex set: dimension mismatch");
  return std::visit(overloaded{
                        [&](const Halfspace& h) {
                          double s = -h.b;
                          for (std::size_t i = 0; i < x.size(); ++i) s += h.a[i] * x[i];
                          return s;
                        },
                        [&](const Ball& b) { return dist(x, b.center) - b.radius; },
                        [&](const Sublevel& s) { return s.g.eval(x); },
                        [&](const PmiSet& p) { return lambda_max(p.P.eval_matrix(x)).first; },
                    },
                    shape);
}

std::vector<double> lambda_max_gradient(const MatrixPolynomial& P, std::span<const double> x) {
  return to_std(pmi_eval(P, to_vec(std::vector<double>(x.begin(), x.end())), false).grad);
}

std::vector<double> project(const ConvexSet& c, std::span<const double> x0, double tol) {
  if (!(tol > 0)) throw ArgumentError("projection tolerance must be positive");
  c.validate();
  if (x0.size() != c.dim()) throw ArgumentError("projection: dimension mismatch");
  std::vector<double> x(x0.begin(), x0.end());
  if (const auto* h = std::get_if<Halfspace>(&c.shape)) {
    const double v = c.value(x);
    if (v <= 0) return x;
    double aa = 0;
    for (double a : h->a) aa += a * a;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= v / aa * h->a[i];
    return x;
  }
  if (const auto* b = std::get_if<Ball>(&c.shape)) {
    const double r = dist(x, b->center);
    if (r <= b->radius) return x;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = b->center[i] + b->radius / r * (x[i] - b->center[i]);
    return x;
  }
  if (c.value(x) <= tol) return x;
  if (const auto* p = std::get_if<PmiSet>(&c.shape)) {
    try {
      return kkt_project(model_for(c), to_vec(x), tol);
    } catch (const SolverError&) {
      // repeated top eigenvalue near the solution
      return ClusterProjector(p->P, to_vec(x)).run(to_vec(x), tol);
    }
  }
  return kkt_project(model_for(c), to_vec(x), tol);
}

double distance_to_set(const ConvexSet& c, std::span<const double> x, double tol) {
  const auto p = project(c, x, tol);
  return dist(x, p);
}

bool in_intersection(const std::vector<ConvexSet>& sets, std::span<const double> x, double tol) {
  for (const auto& c : sets) {
    if (distance_to_set(c, x) > tol) return false;
  }
  return true;
}

ExponentQuery cyclic_exponent_query(const std::vector<ConvexSet>& sets) {
  if (sets.empty()) throw ArgumentError("cyclic: no sets");
  long m = 1, d = 1;
  for (const auto& c : sets) {
    std::visit(overloaded{
                   [&](const Halfspace&) {},
                   [&](const Ball&) { d = std::max(d, 2L); },
                   [&](const Sublevel& s) { d = std::max<long>(d, s.g.degree()); },
                   [&](const PmiSet& p) {
                     m = std::max<long>(m, static_cast<long>(p.P.size()));
                     d = std::max<long>(d, p.P.degree());
                   },
               },
               c.shape);
  }
  ExponentQuery q;
  q.setting = Setting::CYCLIC_6_3;
  q.n = static_cast<long>(sets.front().dim());
  q.m = m;
  q.d = d;
  q.L = static_cast<long>(sets.size());
  return q;
}

PowerLawFit fit_rate(const std::vector<std::vector<double>>& traj, std::span<const double> x_inf,
                     double tail_fraction) {
  if (traj.size() < 10) {
    PowerLawFit f;
    f.degenerate = true;
    f.note = "fewer than 10 recorded iterates";
    return f;
  }
  std::vector<double> k, e;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    k.push_back(static_cast<double>(i));
    e.push_back(dist(traj[i], x_inf));
  }
  return fit_power_law(k, e, tail_fraction);
}

CyclicRun cyclic_project(const std::vector<ConvexSet>& sets, std::span<const double> x0, std::size_t sweeps,
                         double tol, bool record, std::size_t burn_down_factor) {
  if (sets.empty()) throw ArgumentError("cyclic_project: no sets");
  if (sweeps < 1) throw ArgumentError("cyclic_project: sweeps must be at least 1");
  for (const auto& c : sets) {
    c.validate();
    if (c.dim() != x0.size()) throw ArgumentError("cyclic_project: dimension mismatch");
  }
  CyclicRun run;
  std::vector<double> x(x0.begin(), x0.end());
  auto measure = [&](const std::vector<double>& z, std::vector<double>& per) {
    per.clear();
    double sum = 0;
    for (const auto& c : sets) {
      per.push_back(distance_to_set(c, z));
      sum += per.back();
    }
    return sum;
  };
  auto sweep = [&](std::size_t k) {
    for (std::size_t l = 0; l < sets.size(); ++l) {
      try {
        x = project(sets[l], x);
      } catch (const SolverError& e) {
        throw SolverError(std::string(e.what()) + " (sweep " + std::to_string(k) + ", set " +
                              std::to_string(l) + ")",
                          e.residual());
      }
    }
  };
  std::vector<double> per;
  double res = measure(x, per);
  if (record) {
    run.iterates.push_back(x);
    run.set_distances.push_back(per);
    run.residuals.push_back(res);
  }
  for (std::size_t k = 1; k <= sweeps && res > tol; ++k) {
    sweep(k);
    res = measure(x, per);
    run.sweeps_done = k;
    if (record) {
      run.iterates.push_back(x);
      run.set_distances.push_back(per);
      run.residuals.push_back(res);
    }
  }
  run.converged = res <= tol;
  run.final_iterate = x;
  const std::size_t extra = sweeps * (burn_down_factor > 0 ? burn_down_factor - 1 : 0);
  for (std::size_t k = 1; k <= extra && res > tol; ++k) {
    sweep(sweeps + k);
    if (k % 16 == 0 || k == extra) res = measure(x, per);
  }
  run.limit_estimate = x;
  if (record) {
    for (std::size_t k = 0; k + 1 < run.iterates.size(); ++k) {
      const double diff = dist(run.iterates[k + 1], run.limit_estimate) - dist(run.iterates[k], run.limit_estimate);
      run.fejer_worst = k == 0 ? diff : std::max(run.fejer_worst, diff);
      if (diff > 1e-10) run.fejer_ok = false;
    }
    run.fit = fit_rate(run.iterates, run.limit_estimate);
  }
  try {
    run.theory = exponent_for(cyclic_exponent_query(sets));
  } catch (const ArgumentError&) {
    run.theory.reset();
  }
  return run;
}

std::vector<double> dykstra_project(const std::vector<ConvexSet>& sets, std::span<const double> x0,
                                    std::size_t max_sweeps, double tol) {
  if (sets.empty()) throw ArgumentError("dykstra: no sets");
  const std::size_t n = x0.size();
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<std::vector<double>> inc(sets.size(), std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < max_sweeps; ++k) {
    double change = 0;
    for (std::size_t l = 0; l < sets.size(); ++l) {
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = x[i] + inc[l][i];
      const auto y = project(sets[l], z);
      for (std::size_t i = 0; i < n; ++i) {
        inc[l][i] = z[i] - y[i];
        change += (y[i] - x[i]) * (y[i] - x[i]);
      }
      x = y;
    }
    if (std::sqrt(change) <= tol) break;
  }
  return x;
}

double intersection_distance(const std::vector<ConvexSet>& sets, std::span<const double> x,
                             const std::vector<std::vector<double>>& feasible_points) {
  constexpr double kFeasTol = 1e-10;
  std::vector<double> best;
  double best_d = std::numeric_limits<double>::infinity();
  auto offer = [&](const std::vector<double>& z) {
    const double d = dist(x, z);
    if (d < best_d) {
      best_d = d;
      best = z;
    }
  };
  for (const auto& z : feasible_points) {
    if (in_intersection(sets, z, kFeasTol)) offer(z);
  }
  const auto z = dykstra_project(sets, x);
  if (in_intersection(sets, z, kFeasTol)) offer(z);
  if (best.empty()) throw SolverError("intersection distance: no feasible point available");
  // compass search inside C
  const std::size_t n = x.size();
  double step = 0.1 * best_d;
  for (int it = 0; it < 20000 && step > 1e-13 && best_d > 0; ++it) {
    bool moved = false;
    std::vector<std::vector<double>> dirs;
    std::vector<double> to_x(n);
    for (std::size_t i = 0; i < n; ++i) to_x[i] = (x[i] - best[i]) / best_d;
    dirs.push_back(to_x);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> e(n, 0.0);
      e[i] = 1.0;
      dirs.push_back(e);
      e[i] = -1.0;
      dirs.push_back(e);
    }
    for (const auto& dir : dirs) {
      std::vector<double> cand(n);
      for (std::size_t i = 0; i < n; ++i) cand[i] = best[i] + step * dir[i];
      const double d = dist(x, cand);
      if (d < best_d && in_intersection(sets, cand, kFeasTol)) {
        best = cand;
        best_d = d;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best_d;
}

HolderReport check_intersection_holder(const std::vector<ConvexSet>& sets,
                                       const std::vector<std::vector<double>>& samples,
                                       const std::vector<std::vector<double>>& feasible_points,
                                       double tau_theory, double slack) {
  if (sets.empty()) throw ArgumentError("holder check: no sets");
  HolderReport rep;
  rep.tau_theory = tau_theory;
  rep.slack = slack;
  rep.rows.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    HolderRow row;
    row.x = samples[i];
    for (const auto& c : sets) row.sum_dist += distance_to_set(c, row.x);
    row.dist = intersection_distance(sets, row.x, feasible_points);
    rep.rows[i] = std::move(row);
  });
  std::vector<double> a, b;
  for (const auto& row : rep.rows) {
    if (row.sum_dist > 1e-12 && row.dist > 1e-12) {
      a.push_back(row.sum_dist);
      b.push_back(row.dist);
    }
  }
  const LogLogFit fit = loglog_fit(a, b);
  rep.points_used = fit.points;
  if (!fit.ok || fit.points < 3) {
    rep.degenerate = true;
    rep.verdict = true;
    return rep;
  }
  rep.tau_emp = fit.slope;
  rep.c0 = std::exp(fit.intercept);
  rep.verdict = tau_theory <= rep.tau_emp + slack;
  return rep;
}

ConvexityCheck convexity_spot_check(const ConvexSet& c, const Box& box, std::size_t pairs, std::uint64_t seed) {
  ConvexityCheck out;
  if (std::holds_alternative<Halfspace>(c.shape) || std::holds_alternative<Ball>(c.shape)) return out;
  if (box.dim() != c.dim()) throw ArgumentError("convexity check: box dimension mismatch");
  out.pairs = pairs;
  out.spot_checked = true;
  std::vector<char> bad(pairs, 0);
  parallel_for(pairs, [&](std::size_t i) {
    auto rng = task_rng(seed, i);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = box.dim();
    std::vector<double> p(n), q(n), mid(n);
    for (std::size_t k = 0; k < n; ++k) {
      p[k] = box.lower[k] + u(rng) * (box.upper[k] - box.lower[k]);
      q[k] = box.lower[k] + u(rng) * (box.upper[k] - box.lower[k]);
      mid[k] = 0.5 * (p[k] + q[k]);
    }
    if (c.value(mid) > std::max(c.value(p), c.value(q)) + 1e-8) bad[i] = 1;
  });
  for (char b : bad) out.violations += b;
  return out;
}

}  // namespace polyeb
