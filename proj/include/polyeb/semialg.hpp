#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "polyeb/exponents.hpp"
#include "polyeb/polynomial.hpp"

namespace polyeb {

/// Axis-aligned compact box.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  Box() = default;
  Box(std::vector<double> lo, std::vector<double> hi);
  static Box cube(std::size_t dim, double lo, double hi);

  std::size_t dim() const { return lower.size(); }
  bool contains(std::span<const double> p, double tol = 0.0) const;
  double diameter() const;
  void validate(const std::string& field) const;
  friend bool operator==(const Box&, const Box&) = default;
};

/// Y(x) = {y in box : g_i(x,y) ≤ 0, h_j(x,y) = 0}; polynomials live in
/// n+m variables ordered (x, y).
struct ParameterSetDescription {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Polynomial> ineqs;
  std::vector<Polynomial> eqs;
  Box box;

  std::size_t r() const { return ineqs.size(); }
  std::size_t s() const { return eqs.size(); }
  /// True when no constraint involves an x-variable.
  bool x_independent() const;
  void validate() const;
  friend bool operator==(const ParameterSetDescription&, const ParameterSetDescription&) = default;
};

struct ParametricSystem {
  std::size_t n = 0;
  std::size_t m = 0;
  unsigned L = 1;
  unsigned d = 1;
  std::vector<Polynomial> objectives;
  ParameterSetDescription Y;
  Box x_box;
  /// Exponent query of the problem this system was reduced from, if any.
  std::optional<ExponentQuery> origin;

  std::size_t r() const { return Y.r(); }
  std::size_t s() const { return Y.s(); }
  /// Checks arities, boxes and the degree cap; throws ArgumentError with a field path.
  void validate() const;
  friend bool operator==(const ParametricSystem&, const ParametricSystem&) = default;
};

struct CQCertificate {
  bool holds = false;
  std::vector<double> witness;
  double margin = 0.0;  // +inf when the condition holds vacuously
  std::size_t samples_used = 0;
  double tol = 0.0;
  std::string note;
};

inline constexpr double kMembershipTol = 1e-8;

/// Concatenates x and y into the (x, y) evaluation layout.
std::vector<double> join_xy(std::span<const double> x, std::span<const double> y);

bool membership(const ParameterSetDescription& Y, std::span<const double> x,
                std::span<const double> y, double tol);

/// Grid plus seeded random points in the box, Gauss–Newton on the equality
/// residual, then a membership filter at 1e-8. Deterministic in (budget, seed).
std::vector<std::vector<double>> sample_parameter_set(const ParameterSetDescription& Y,
                                                      std::span<const double> x, std::size_t budget,
                                                      std::uint64_t seed);

/// Gauss–Newton restoration of h(x,y) = 0 (and violated g_i = 0). Returns the
/// final residual; y is updated in place.
double restore_feasibility(const ParameterSetDescription& Y, std::span<const double> x,
                           std::vector<double>& y, int max_iter = 30,
                           bool include_violated_ineqs = false);

/// MFCQ for constraints that do not depend on x.
CQCertificate check_mfcq(const ParameterSetDescription& Y, std::span<const double> y,
                         double tol = kMembershipTol);

/// MMFCQ at x̄, certified on the supplied argmax points only.
CQCertificate check_mmfcq(const ParametricSystem& sys, std::span<const double> xbar,
                          const std::vector<std::vector<double>>& argmax_points,
                          double tol = kMembershipTol);

/// Feasible points of a grid over x_box, found by rejection on the sup
/// residual. Built once, queried many times.
class SolutionSetGrid {
 public:
  SolutionSetGrid(const ParametricSystem& sys, std::size_t grid_per_axis, std::size_t sup_budget,
                  std::uint64_t seed, double residual_tol = 1e-8);

  /// Minimum distance to a feasible grid point; +inf when there is none.
  double distance(std::span<const double> x) const;
  bool empty() const { return feasible_.empty(); }
  double spacing() const { return spacing_; }
  const std::vector<std::vector<double>>& feasible_points() const { return feasible_; }
  std::size_t grid_points() const { return grid_points_; }

 private:
  std::vector<std::vector<double>> feasible_;
  double spacing_ = 0.0;
  std::size_t grid_points_ = 0;
};

struct DistanceResult {
  double distance = std::numeric_limits<double>::infinity();
  bool no_feasible_point = false;
  double spacing = 0.0;
};

DistanceResult distance_to_solution_set(const ParametricSystem& sys, std::span<const double> x,
                                        std::size_t grid_per_axis, std::size_t sup_budget,
                                        std::uint64_t seed);

/// Points per axis for an n-dimensional grid holding at most `budget` points.
std::size_t grid_points_per_axis(std::size_t budget, std::size_t dim);
/// i-th point of a per-axis grid with k points (center when k = 1).
std::vector<double> grid_point(const Box& box, std::size_t k, std::size_t index);

}  // namespace polyeb
