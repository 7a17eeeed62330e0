#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "polyeb/feasibility.hpp"
#include "polyeb/io.hpp"
#include "polyeb/semialg.hpp"

namespace fixtures {

using namespace polyeb;

inline Polynomial poly(std::size_t nv, std::initializer_list<std::pair<Rational, Exponent>> terms) {
  Polynomial p(nv);
  for (const auto& [c, e] : terms) p.add_term(e, c);
  return p;
}

/// One objective in (x, y) with one equality constraint and the given boxes.
inline ParametricSystem single(const Polynomial& f, std::vector<Polynomial> ineqs, std::vector<Polynomial> eqs,
                               unsigned d, Box y_box, Box x_box) {
  ParametricSystem sys;
  sys.n = x_box.dim();
  sys.m = y_box.dim();
  sys.L = 1;
  sys.d = d;
  sys.objectives = {f};
  sys.Y.n = sys.n;
  sys.Y.m = sys.m;
  sys.Y.ineqs = std::move(ineqs);
  sys.Y.eqs = std::move(eqs);
  sys.Y.box = std::move(y_box);
  sys.x_box = std::move(x_box);
  sys.validate();
  return sys;
}

/// φ(x) = x²: f = x²y on Y = {y = 1}.
inline ParametricSystem square_system() {
  return single(poly(2, {{1, {2, 1}}}), {}, {poly(2, {{1, {0, 1}}, {-1, {0, 0}}})}, 3, Box::cube(1, 0.0, 2.0),
                Box::cube(1, -1.0, 1.0));
}

/// φ(x) = |x|: f = xy on the sphere y² = 1.
inline ParametricSystem abs_system() {
  return single(poly(2, {{1, {1, 1}}}), {}, {poly(2, {{1, {0, 2}}, {-1, {0, 0}}})}, 2, Box::cube(1, -1.1, 1.1),
                Box::cube(1, -2.0, 2.0));
}

/// φ(x) = |x| − 1 with Y = {y² ≤ 1}; feasible set [−1, 1].
inline ParametricSystem gsip_interval_system() {
  return single(poly(2, {{1, {1, 1}}, {-1, {0, 0}}}), {poly(2, {{1, {0, 2}}, {-1, {0, 0}}})}, {}, 2,
                Box::cube(1, -1.1, 1.1), Box::cube(1, -2.0, 2.0));
}

inline std::string gallery(const std::string& name) {
  return std::string(POLYEB_TEST_GALLERY_DIR) + "/" + name + ".json";
}

inline std::vector<ConvexSet> parabola_halfplane() {
  return convex_sets_from_json(read_json_file(gallery("parabola_halfplane")));
}

inline double norm2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Random polynomial with small integer coefficients.
inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t nv, unsigned degree, int terms) {
  std::uniform_int_distribution<int> coef(-5, 5), var(0, static_cast<int>(nv) - 1), deg(0, static_cast<int>(degree));
  Polynomial p(nv);
  for (int t = 0; t < terms; ++t) {
    Exponent e(nv, 0);
    const int k = deg(rng);
    for (int i = 0; i < k; ++i) e[var(rng)] += 1;
    p.add_term(e, coef(rng));
  }
  return p;
}

/// Min-norm point of co(points) in the plane by a zooming grid over the weight simplex.
inline double grid_min_norm(const std::vector<std::vector<double>>& pts) {
  const std::size_t k = pts.size();
  auto value = [&](const std::vector<double>& w) {
    double x = 0, y = 0;
    for (std::size_t i = 0; i < k; ++i) {
      x += w[i] * pts[i][0];
      y += w[i] * pts[i][1];
    }
    return std::sqrt(x * x + y * y);
  };
  // random-restart coordinate-pair zoom: move weight between pairs of points
  std::vector<double> w(k, 1.0 / static_cast<double>(k));
  double best = value(w);
  for (double h = 0.25; h > 1e-12; h *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          if (i == j) continue;
          for (int s = 1; s <= 20; ++s) {
            const double t = std::min(h * s / 20.0, w[j]);
            std::vector<double> c = w;
            c[i] += t;
            c[j] -= t;
            const double v = value(c);
            if (v < best - 1e-15) {
              best = v;
              w = c;
              improved = true;
            }
          }
        }
      }
    }
  }
  return best;
}

}  // namespace fixtures
