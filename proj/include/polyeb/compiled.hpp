#pragma once

#include <span>
#include <vector>

#include "polyeb/linalg.hpp"
#include "polyeb/semialg.hpp"

namespace polyeb {

/// Polynomial with its (x, y) gradient and y-Hessian precomputed.
struct CompiledPoly {
  Polynomial p;
  std::vector<Polynomial> grad_x;  // n entries
  std::vector<Polynomial> grad_y;  // m entries
  std::vector<Polynomial> hess_y;  // m×m row-major

  CompiledPoly() = default;
  CompiledPoly(const Polynomial& poly, std::size_t n, std::size_t m);

  double value(std::span<const double> xy) const { return p.eval(xy); }
  Vec gy(std::span<const double> xy) const;
  Vec gx(std::span<const double> xy) const;
  Mat hy(std::span<const double> xy) const;
};

struct CompiledSet {
  const ParameterSetDescription* desc = nullptr;
  std::vector<CompiledPoly> g;
  std::vector<CompiledPoly> h;

  explicit CompiledSet(const ParameterSetDescription& Y);
  std::size_t n() const { return desc->n; }
  std::size_t m() const { return desc->m; }
};

struct CompiledSystem {
  const ParametricSystem* sys = nullptr;
  CompiledSet set;
  std::vector<CompiledPoly> f;

  explicit CompiledSystem(const ParametricSystem& s);
};

double restore_feasibility(const CompiledSet& cs, std::span<const double> x, std::vector<double>& y,
                           int max_iter, bool include_violated_ineqs);

std::vector<std::vector<double>> sample_parameter_set(const CompiledSet& cs, std::span<const double> x,
                                                      std::size_t budget, std::uint64_t seed);

}  // namespace polyeb
