#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyeb/marginal.hpp"
#include "polyeb/rates.hpp"

namespace polyeb {

struct FlowOptions {
  double step = 1e-3;
  double horizon = 1.0;
  SupOptions sup;
  double alpha_cap = kDefaultAlphaCap;
  int max_halvings = 10;
  double slope_stop = 1e-9;
  double increase_tol = 1e-12;
  double burn_down_factor = 5.0;
};

struct FlowRun {
  std::vector<double> t;
  std::vector<std::vector<double>> x;
  std::vector<double> phi;
  std::vector<double> slope;
  std::vector<double> step_used;  // step k leads from x[k] to x[k+1]
  std::vector<double> energy_gap;  // φ_k − φ_{k+1} − ½·h_k·‖v_k‖²
  std::vector<char> smooth;        // v changed by less than half its norm across the step
  bool converged = false;          // slope termination
  std::vector<double> xbar;
  double phi_bar = 0.0;
  std::size_t halvings = 0;
};

/// Explicit Euler on −(least-norm subgradient) with step halving whenever φ
/// would increase; followed by a burn-down continuation that supplies x̄.
FlowRun integrate_flow(const ParametricSystem& sys, std::span<const double> x0, const FlowOptions& opt);
FlowRun integrate_flow(const ParametricSystem& sys, std::span<const double> x0, double step, double horizon,
                       std::size_t budget, std::uint64_t seed);

struct RateCheck {
  PowerLawFit fit;
  double theory = 0.0;
  bool pass = false;
  std::string status;  // "fit", "super-polynomial", "degenerate-pass", "degenerate"
};

struct FlowRateReport {
  Rational theta;
  RateCheck distance;  // ‖x(t) − x̄‖ against (t+1)
  RateCheck value;     // |φ(x(t)) − φ(x̄)| against t
  double min_slope_ratio = 0.0;  // min m_φ / |Δφ|^θ over points with Δφ > 0
  std::size_t ratio_points = 0;
  std::size_t kink_adjacent_steps = 0;
  bool pass = false;
};

FlowRateReport verify_flow_rates(const FlowRun& run, const Rational& theta, double slack = 0.05,
                                 double tail_fraction = 0.5);

}  // namespace polyeb
