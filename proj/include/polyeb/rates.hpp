#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace polyeb {

/// Least squares log y = a + b log x over pairs with x, y > 0.
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
  bool ok = false;
};

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

/// y ≈ M·x^{−exponent} fitted on the last tail_fraction of the samples.
struct PowerLawFit {
  double M = 0.0;
  double exponent = 0.0;
  std::size_t points = 0;
  bool degenerate = false;        // fewer than 3 positive tail values
  bool finite_time = false;       // tail reaches exact zeros
  bool super_polynomial = false;  // local exponent keeps growing along the tail
  std::string note;
};

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                          double tail_fraction = 0.5);

}  // namespace polyeb
