#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polyeb/exponents.hpp"
#include "polyeb/matrix_polynomial.hpp"
#include "polyeb/rates.hpp"
#include "polyeb/semialg.hpp"

namespace polyeb {

struct Halfspace {
  std::vector<double> a;  // ⟨a, x⟩ ≤ b
  double b = 0.0;
};

struct Ball {
  std::vector<double> center;
  double radius = 1.0;
};

/// {g ≤ 0}; convexity of g is the caller's declaration.
struct Sublevel {
  Polynomial g;
};

/// {P(x) ⪯ 0}, handled through g = λ_max∘P.
struct PmiSet {
  MatrixPolynomial P;
  bool convex_declared = false;
};

struct ConvexSet {
  std::variant<Halfspace, Ball, Sublevel, PmiSet> shape;

  std::size_t dim() const;
  void validate() const;
  std::string kind() const;
  /// Constraint value: ⟨a,x⟩−b, ‖x−c‖−r, g(x) or λ_max(P(x)).
  double value(std::span<const double> x) const;
  bool declared_convex() const;
};

inline constexpr double kProjectionTol = 1e-12;
inline constexpr int kProjectionMaxIter = 500;

/// Euclidean projection. Closed forms for halfspace and ball, KKT Newton with
/// merit backtracking for sublevel and PMI sets. Throws SolverError on
/// non-convergence.
std::vector<double> project(const ConvexSet& c, std::span<const double> x0, double tol = kProjectionTol);

double distance_to_set(const ConvexSet& c, std::span<const double> x, double tol = kProjectionTol);

/// Gradient of λ_max∘P at x; tied top eigenvalues (within 1e-10) are averaged.
std::vector<double> lambda_max_gradient(const MatrixPolynomial& P, std::span<const double> x);

struct CyclicRun {
  std::vector<std::vector<double>> iterates;  // index k = after k sweeps; k = 0 is x0
  std::vector<std::vector<double>> set_distances;
  std::vector<double> residuals;  // Σ_l dist(x_k, C_l)
  std::vector<double> final_iterate;
  std::vector<double> limit_estimate;  // after the burn-down continuation
  std::size_t sweeps_done = 0;
  bool converged = false;  // residual reached tol
  PowerLawFit fit;
  std::optional<ExponentReport> theory;  // absent when the dims audit fails
  bool fejer_ok = true;
  double fejer_worst = 0.0;  // max over steps of ‖x_{k+1}−x_∞‖ − ‖x_k−x_∞‖
};

/// Round-robin projections; records end-of-sweep iterates and continues 10×
/// past the recorded sweeps to estimate the limit.
CyclicRun cyclic_project(const std::vector<ConvexSet>& sets, std::span<const double> x0, std::size_t sweeps,
                         double tol = 1e-12, bool record = true, std::size_t burn_down_factor = 10);

/// CYCLIC_6_3 query from the set descriptions: m = largest matrix size, d = largest degree.
ExponentQuery cyclic_exponent_query(const std::vector<ConvexSet>& sets);

/// Fits ‖x_k − x_∞‖ ≈ M k^{−ρ} on the tail (k ≥ 1).
PowerLawFit fit_rate(const std::vector<std::vector<double>>& traj, std::span<const double> x_inf,
                     double tail_fraction = 0.5);

/// Dykstra's alternating projections: nearest point of the intersection.
std::vector<double> dykstra_project(const std::vector<ConvexSet>& sets, std::span<const double> x0,
                                    std::size_t max_sweeps = 2000, double tol = 1e-14);

bool in_intersection(const std::vector<ConvexSet>& sets, std::span<const double> x, double tol);

struct HolderRow {
  std::vector<double> x;
  double dist = 0.0;      // dist(x, ∩C_l)
  double sum_dist = 0.0;  // Σ_l dist(x, C_l)
};

struct HolderReport {
  std::vector<HolderRow> rows;
  double c0 = 0.0;
  double tau_emp = 0.0;
  std::size_t points_used = 0;
  bool degenerate = false;
  double tau_theory = 0.0;
  bool verdict = false;
  double slack = 0.05;
};

/// dist(x, C) from Dykstra and the supplied feasible points, refined by a
/// compass search inside C; regression of log dist(x,C) on log Σ dist(x,C_l).
HolderReport check_intersection_holder(const std::vector<ConvexSet>& sets,
                                       const std::vector<std::vector<double>>& samples,
                                       const std::vector<std::vector<double>>& feasible_points,
                                       double tau_theory, double slack = 0.05);

double intersection_distance(const std::vector<ConvexSet>& sets, std::span<const double> x,
                             const std::vector<std::vector<double>>& feasible_points);

struct ConvexityCheck {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  bool spot_checked = false;
};

/// Midpoint test g((x+y)/2) ≤ max(g(x), g(y)) + 1e-8 on random pairs in the box.
ConvexityCheck convexity_spot_check(const ConvexSet& c, const Box& box, std::size_t pairs = 500,
                                    std::uint64_t seed = 0);

}  // namespace polyeb
