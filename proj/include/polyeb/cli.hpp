#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace polyeb::cli {

/// Every default the command line uses. Flags override these values.
struct Defaults {
  static constexpr std::uint64_t seed = 0;
  static constexpr std::size_t sup_budget = 64;
  static constexpr std::size_t samples = 200;
  static constexpr double radius = 0.5;
  static constexpr double slack = 0.05;
  static constexpr double flow_step = 1e-3;
  static constexpr double flow_horizon = 1.0;
  static constexpr std::size_t sweeps = 200;
  static constexpr double cycle_tol = 1e-12;
  static constexpr long counterexample_k_max = 1'000'000;
  static constexpr std::size_t gsip_grid = 401;
};

enum ExitCode : int { kOk = 0, kVerdictFailed = 1, kUsage = 2, kSolver = 3 };

/// Runs one subcommand. Reports go to `out`, JSON error objects to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Names of the bundled gallery files (without extension).
std::vector<std::string> gallery_names();
std::string gallery_path(const std::string& name);

const char* version();

}  // namespace polyeb::cli
