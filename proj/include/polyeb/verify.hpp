#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyeb/exponents.hpp"
#include "polyeb/marginal.hpp"
#include "polyeb/rates.hpp"

namespace polyeb {

inline constexpr double kVerdictSlack = 0.05;

/// i-th point of the Halton sequence in [0,1)^dim (bases 2, 3, 5, ...).
std::vector<double> halton_point(std::size_t index, std::size_t dim);

/// n points in the closed ball B_radius(center): Halton points of the cube
/// mapped to it, skipping those outside the ball. The seed offsets the index.
std::vector<std::vector<double>> ball_samples(std::span<const double> center, double radius, std::size_t n,
                                              std::uint64_t seed);

/// Query used by the error-bound verdict: the reduction origin when present,
/// EB_4_2 on the system's own dimensions otherwise.
ExponentQuery error_bound_query(const ParametricSystem& sys);
ExponentQuery loja_query(const ParametricSystem& sys);

struct ErrorBoundOptions {
  std::size_t grid_per_axis = 0;  // 0: 201 for n = 1, 101 for n = 2, 31 for n = 3
  std::size_t sup_budget = 64;
  double slack = kVerdictSlack;
};

struct ErrorBoundRow {
  std::vector<double> x;
  double residual = 0.0;
  double dist = 0.0;
};

struct ErrorBoundReport {
  std::vector<ErrorBoundRow> rows;
  double c = 0.0;
  double tau_emp = 0.0;
  std::size_t points_used = 0;
  std::size_t zero_residual = 0;
  bool no_information = false;
  ExponentReport theory;
  double slack = kVerdictSlack;
  bool verdict = false;
  double grid_spacing = 0.0;
};

ErrorBoundReport verify_error_bound(const ParametricSystem& sys, std::span<const double> xbar, std::size_t n_samples,
                                    double radius, std::uint64_t seed, const ErrorBoundOptions& opt = {});

struct LojaOptions {
  std::size_t sup_budget = 64;
  std::vector<double> extra_exponents{0.5};
  double threshold = 1e-8;
};

struct LojaRow {
  std::vector<double> x;
  double slope = 0.0;
  double dphi = 0.0;
};

struct LojaReport {
  std::vector<LojaRow> rows;
  double phi_bar = 0.0;
  ExponentReport theory;
  double min_ratio_theory = 0.0;  // min slope/|Δφ|^{1−τ}
  std::vector<std::pair<double, double>> min_ratio_extra;  // (exponent, min ratio)
  double one_minus_tau_emp = 0.0;  // regression of log slope on log |Δφ|
  std::size_t points_used = 0;
  bool no_information = false;
  bool verdict = false;
};

LojaReport verify_loja(const ParametricSystem& sys, std::span<const double> xbar, std::size_t n_samples,
                       double radius, std::uint64_t seed, const LojaOptions& opt = {});

struct CounterexampleRow {
  long k = 0;
  double x = 0.0;
  double dist = 0.0;
  double residual = 0.0;
  double closed_form = 0.0;  // 1/(k+1)
  double relative_error = 0.0;
  std::vector<double> ratios;  // dist/residual^{1/τ} for τ in taus
};

struct CounterexampleReport {
  std::vector<double> taus{1.0, 0.5, 0.25};
  std::vector<CounterexampleRow> rows;
  bool residual_ok = false;
  bool monotone = false;
  bool growth_ok = false;         // factor ≥ 1e3 from k = 10 to k = 1e6
  bool growth_checked = false;    // k_max reached 1e6
  std::vector<double> growth;     // per τ, last/first ratio
};

/// Rows for k = 10, 100, ... ≤ k_max, x_k = 1/√ln(k+1).
CounterexampleReport counterexample_1_1(long k_max);

/// (k+1)^{1/τ}/√ln(k+1).
double example11_ratio(long k, double tau);

struct GsipProbeOptions {
  std::size_t grid_per_axis = 401;
  std::size_t sup_budget = 32;
  std::vector<double> direction;  // unit direction of u − ū; e_1 when empty
  std::size_t starts = 5;
  double slack = kVerdictSlack;
};

struct StabilityRow {
  double magnitude = 0.0;
  double excess = 0.0;
  double optimum = 0.0;
  std::vector<std::vector<double>> solutions;
};

struct StabilityReport {
  std::vector<StabilityRow> rows;
  std::vector<std::vector<double>> base_solutions;  // S(ū)
  double exponent = 0.0;
  double c = 0.0;
  std::size_t points_used = 0;
  bool degenerate = false;
  ExponentReport theory;
  bool verdict = false;
  std::size_t feasible_grid_points = 0;
};

/// Solves min p0(x) − ⟨u,x⟩ over the GSIP feasible set for u = ū + δ·dir,
/// and fits the empirical excess e(S(u), S(ū)) against δ.
StabilityReport gsip_stability_probe(const ParametricSystem& sys, const Polynomial& p0, std::span<const double> ubar,
                                     const std::vector<double>& magnitudes, std::uint64_t seed,
                                     const GsipProbeOptions& opt = {});

}  // namespace polyeb
