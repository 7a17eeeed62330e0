#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polyeb/compiled.hpp"
#include "polyeb/semialg.hpp"

namespace polyeb {

struct Maximizer {
  std::vector<double> y;
  std::size_t objective = 0;  // index l
  double value = 0.0;
};

struct SupOptions {
  std::size_t budget = 64;
  std::uint64_t seed = 0;
  std::size_t starts = 10;
  int max_iter = 200;
};

struct SupEvaluation {
  double value = 0.0;
  double residual = 0.0;
  std::vector<Maximizer> maximizers;
  std::size_t starts = 0;
  std::size_t converged = 0;
  std::size_t samples = 0;
};

struct FJPoint {
  double gamma = 0.0;
  std::vector<double> lambda;  // r entries, zero off the active set
  std::vector<double> kappa;   // s entries
  double normalization = 0.0;
  double stationarity = 0.0;
  double complementarity = 0.0;
};

struct HullGenerator {
  std::vector<double> v;
  /// Contributing (maximizer index, FJ point scaled so its gamma equals the weight).
  std::vector<std::pair<std::size_t, FJPoint>> provenance;
  double gamma_total = 0.0;
};

struct SubdifferentialHull {
  std::vector<HullGenerator> generators;
  std::vector<Maximizer> maximizers;
  std::size_t alpha_violations = 0;
  std::size_t degenerate_skipped = 0;
  double alpha_cap = 0.0;
  std::string approximation = "singles plus pairwise gamma grid";
};

/// φ(x) = max_l sup_{y∈Y(x)} f_l(x,y) by sampling plus projected ascent.
SupEvaluation sup_value(const CompiledSystem& cs, std::span<const double> x, const SupOptions& opt);
SupEvaluation sup_value(const ParametricSystem& sys, std::span<const double> x, std::size_t budget,
                        std::uint64_t seed);

/// Vertices of the Fritz–John multiplier polytope at (x, y) for objective l.
std::vector<FJPoint> fj_multipliers(const CompiledSystem& cs, std::span<const double> x,
                                    std::span<const double> y, std::size_t l, double tol = kMembershipTol);
std::vector<FJPoint> fj_multipliers(const ParametricSystem& sys, std::span<const double> x,
                                    std::span<const double> y, std::size_t l, double tol = kMembershipTol);

/// −∇ₓL(x, y, γ, λ, κ) for the given multipliers.
std::vector<double> lagrangian_x_gradient(const CompiledSystem& cs, std::span<const double> x,
                                          std::span<const double> y, std::size_t l, const FJPoint& fj);

SubdifferentialHull subdifferential_hull(const CompiledSystem& cs, std::span<const double> x,
                                         double alpha_cap, const SupOptions& opt);
SubdifferentialHull subdifferential_hull(const ParametricSystem& sys, std::span<const double> x,
                                         double alpha_cap, std::size_t budget, std::uint64_t seed);

struct SlopeResult {
  double slope = 0.0;
  std::vector<double> min_norm;  // element of the hull with least norm
  SubdifferentialHull hull;
  double phi = 0.0;
};

SlopeResult slope_detail(const CompiledSystem& cs, std::span<const double> x, double alpha_cap,
                         const SupOptions& opt);
double slope(const ParametricSystem& sys, std::span<const double> x, std::size_t budget, std::uint64_t seed);

inline constexpr double kDefaultAlphaCap = 1e3;

}  // namespace polyeb
