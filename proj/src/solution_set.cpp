#include <cmath>
#include <limits>

#include "polyeb/errors.hpp"
#include "polyeb/marginal.hpp"
#include "polyeb/parallel.hpp"
#include "polyeb/semialg.hpp"

namespace polyeb {

SolutionSetGrid::SolutionSetGrid(const ParametricSystem& sys, std::size_t grid_per_axis, std::size_t sup_budget,
                                 std::uint64_t seed, double residual_tol) {
  if (sys.n > 3) throw ArgumentError("distance oracle supports n <= 3 only");
  if (grid_per_axis < 3) throw ArgumentError("grid_per_axis must be at least 3");
  CompiledSystem cs(sys);
  SupOptions opt;
  opt.budget = sup_budget;
  opt.seed = seed;
  grid_points_ = 1;
  for (std::size_t i = 0; i < sys.n; ++i) grid_points_ *= grid_per_axis;
  spacing_ = 0.0;
  for (std::size_t i = 0; i < sys.n; ++i) {
    spacing_ = std::max(spacing_, (sys.x_box.upper[i] - sys.x_box.lower[i]) / static_cast<double>(grid_per_axis - 1));
  }
  std::vector<char> ok(grid_points_, 0);
  parallel_for(grid_points_, [&](std::size_t idx) {
    const auto x = grid_point(sys.x_box, grid_per_axis, idx);
    // any sampled member of Y(x) above the tolerance already rules x out
    for (const auto& y : sample_parameter_set(cs.set, x, opt.budget, opt.seed)) {
      const auto xy = join_xy(x, y);
      for (const auto& f : cs.f) {
        if (f.value(xy) > residual_tol) return;
      }
    }
    if (sup_value(cs, x, opt).residual <= residual_tol) ok[idx] = 1;
  });
  for (std::size_t idx = 0; idx < grid_points_; ++idx) {
    if (ok[idx]) feasible_.push_back(grid_point(sys.x_box, grid_per_axis, idx));
  }
}

double SolutionSetGrid::distance(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : feasible_) {
    if (p.size() != x.size()) throw ArgumentError("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - x[i]) * (p[i] - x[i]);
    best = std::min(best, s);
  }
  return std::sqrt(best);
}

DistanceResult distance_to_solution_set(const ParametricSystem& sys, std::span<const double> x,
                                        std::size_t grid_per_axis, std::size_t sup_budget, std::uint64_t seed) {
  if (x.size() != sys.n) throw ArgumentError("distance_to_solution_set: x has wrong dimension");
  SolutionSetGrid grid(sys, grid_per_axis, sup_budget, seed);
  DistanceResult out;
  out.spacing = grid.spacing();
  out.no_feasible_point = grid.empty();
  out.distance = grid.distance(x);
  return out;
}

}  // namespace polyeb
