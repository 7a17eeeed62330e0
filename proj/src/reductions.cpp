#include "polyeb/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyeb/errors.hpp"

namespace polyeb {
namespace {

std::vector<std::size_t> identity_map(std::size_t k) {
  std::vector<std::size_t> v(k);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Polynomial sum_of_squares(std::size_t num_vars, std::size_t first, std::size_t count) {
  Polynomial out(num_vars);
  for (std::size_t i = 0; i < count; ++i) {
    Exponent e(num_vars, 0);
    e[first + i] = 2;
    out.add_term(e, 1);
  }
  return out;
}

void check_quad(std::size_t n, const QuadTriple& q, const std::string& field) {
  if (q.B.size() != n * n) throw ArgumentError(field + ".B: expected " + std::to_string(n * n) + " entries");
  if (q.b.size() != n) throw ArgumentError(field + ".b: expected " + std::to_string(n) + " entries");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (q.B[i * n + j] != q.B[j * n + i]) throw ArgumentError(field + ".B: matrix is not symmetric");
    }
  }
}

}  // namespace

void SOCPSpec::validate() const {
  if (n < 1) throw ArgumentError("n: must be at least 1");
  if (m < 1) throw ArgumentError("m: must be at least 1");
  if (blocks.empty()) throw ArgumentError("blocks: at least one block required");
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    const std::string field = "blocks[" + std::to_string(l) + "]";
    if (blocks[l].size() != m + 1) {
      throw ArgumentError(field + ": expected " + std::to_string(m + 1) + " polynomials");
    }
    for (std::size_t j = 0; j < blocks[l].size(); ++j) {
      if (blocks[l][j].num_vars() != n) {
        throw ArgumentError(field + "[" + std::to_string(j) + "]: expected " + std::to_string(n) + " variables");
      }
      if (blocks[l][j].degree() > d) {
        throw ArgumentError(field + "[" + std::to_string(j) + "]: degree exceeds d = " + std::to_string(d));
      }
    }
  }
}

void RobustQuadSpec::validate() const {
  if (n < 1) throw ArgumentError("n: must be at least 1");
  if (constraints.empty()) throw ArgumentError("constraints: at least one constraint required");
  const std::size_t s = constraints.front().perturbations.size();
  for (std::size_t l = 0; l < constraints.size(); ++l) {
    const std::string field = "constraints[" + std::to_string(l) + "]";
    check_quad(n, constraints[l].nominal, field + ".nominal");
    if (constraints[l].perturbations.size() != s) {
      throw ArgumentError(field + ".perturbations: every constraint needs the same count");
    }
    for (std::size_t j = 0; j < s; ++j) {
      check_quad(n, constraints[l].perturbations[j], field + ".perturbations[" + std::to_string(j) + "]");
    }
  }
  if (s == 0) throw ArgumentError("constraints[0].perturbations: at least one perturbation required");
}

Polynomial quadratic_polynomial(std::size_t n, const QuadTriple& q) {
  check_quad(n, q, "quadratic");
  Polynomial p(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Exponent e(n, 0);
      e[i] += 1;
      e[j] += 1;
      p.add_term(e, q.B[i * n + j]);
    }
    Exponent e(n, 0);
    e[i] = 1;
    p.add_term(e, q.b[i]);
  }
  p.add_term(Exponent(n, 0), q.beta);
  return p;
}

Polynomial lagrange_basis(std::size_t num_vars, std::size_t t_index, unsigned L, unsigned l) {
  if (l < 1 || l > L) throw ArgumentError("lagrange_basis: l must lie in 1..L");
  Polynomial out = Polynomial::constant(num_vars, 1);
  const Polynomial t = Polynomial::variable(num_vars, t_index);
  for (unsigned j = 1; j <= L; ++j) {
    if (j == l) continue;
    Polynomial factor = t - Polynomial::constant(num_vars, Rational(j));
    Rational scale(1, static_cast<long>(l) - static_cast<long>(j));
    scale.canonicalize();
    factor *= scale;
    out = out * factor;
  }
  return out;
}

ParametricSystem collapse_objectives(const ParametricSystem& sys) {
  sys.validate();
  if (sys.L < 2) throw ArgumentError("collapse_objectives: needs L >= 2");
  const std::size_t nv = sys.n + sys.m + 1;
  const std::size_t t_index = sys.n + sys.m;
  const auto map = identity_map(sys.n + sys.m);

  ParametricSystem out;
  out.n = sys.n;
  out.m = sys.m + 1;
  out.L = 1;
  out.d = sys.d + sys.L - 1;
  out.x_box = sys.x_box;
  out.origin = sys.origin;

  Polynomial f(nv);
  for (unsigned l = 1; l <= sys.L; ++l) {
    f += lagrange_basis(nv, t_index, sys.L, l) * sys.objectives[l - 1].embed(nv, map);
  }
  if (f.degree() > out.d) throw SolverError("collapse_objectives: interpolated objective exceeds d+L-1");
  out.objectives.push_back(std::move(f));

  out.Y.n = sys.n;
  out.Y.m = sys.m + 1;
  for (const auto& g : sys.Y.ineqs) out.Y.ineqs.push_back(g.embed(nv, map));
  for (const auto& h : sys.Y.eqs) out.Y.eqs.push_back(h.embed(nv, map));
  Polynomial pin = Polynomial::constant(nv, 1);
  const Polynomial t = Polynomial::variable(nv, t_index);
  for (unsigned l = 1; l <= sys.L; ++l) pin = pin * (t - Polynomial::constant(nv, Rational(l)));
  out.Y.eqs.push_back(std::move(pin));
  out.Y.box = sys.Y.box;
  out.Y.box.lower.push_back(0.5);
  out.Y.box.upper.push_back(static_cast<double>(sys.L) + 0.5);
  out.validate();
  return out;
}

ParametricSystem pmi_to_scalar(const MatrixPolynomial& P, const Box& x_box) {
  const std::size_t n = P.num_vars();
  const std::size_t m = P.size();
  if (n < 1 || m < 1) throw ArgumentError("pmi_to_scalar: empty matrix polynomial");
  const std::size_t nv = n + m;
  const auto map = identity_map(n);

  ParametricSystem out;
  out.n = n;
  out.m = m;
  out.L = 1;
  out.d = P.degree() + 2;
  out.x_box = x_box;
  Polynomial f(nv);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Exponent e(nv, 0);
      e[n + i] += 1;
      e[n + j] += 1;
      f += P.entry(i, j).embed(nv, map) * Polynomial::monomial(nv, e, 1);
    }
  }
  if (f.degree() > out.d) throw SolverError("pmi_to_scalar: objective degree exceeds deg P + 2");
  out.objectives.push_back(std::move(f));
  out.Y.n = n;
  out.Y.m = m;
  out.Y.eqs.push_back(sum_of_squares(nv, n, m) - Polynomial::constant(nv, 1));
  out.Y.box = Box::cube(m, -1.1, 1.1);

  ExponentQuery q;
  q.setting = Setting::PMI_4_6;
  q.n = static_cast<long>(n);
  q.m = static_cast<long>(m);
  q.d = std::max<long>(1, P.degree());
  out.origin = q;
  out.validate();
  return out;
}

ParametricSystem socp_to_sup(const SOCPSpec& spec, const Box& x_box) {
  spec.validate();
  const std::size_t n = spec.n, m = spec.m, L = spec.L();
  const std::size_t nv = n + m * L;
  const auto map = identity_map(n);

  ParametricSystem out;
  out.n = n;
  out.m = m * L;
  out.L = static_cast<unsigned>(L);
  out.d = spec.d + 1;
  out.x_box = x_box;
  out.Y.n = n;
  out.Y.m = m * L;
  out.Y.box = Box::cube(m * L, -1.1, 1.1);
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t first = n + l * m;
    Polynomial f(nv);
    for (std::size_t j = 0; j < m; ++j) {
      f += Polynomial::variable(nv, first + j) * spec.blocks[l][j].embed(nv, map);
    }
    f -= spec.blocks[l][m].embed(nv, map);
    if (f.degree() > out.d) throw SolverError("socp_to_sup: objective degree exceeds d+1");
    out.objectives.push_back(std::move(f));
    out.Y.eqs.push_back(sum_of_squares(nv, first, m) - Polynomial::constant(nv, 1));
  }
  ExponentQuery q;
  q.setting = Setting::SOCP_5_3;
  q.n = static_cast<long>(n);
  q.m = static_cast<long>(m);
  q.d = static_cast<long>(spec.d);
  q.L = static_cast<long>(L);
  out.origin = q;
  out.validate();
  return out;
}

SOCPSpec robustify_quadratic(const RobustQuadSpec& spec) {
  spec.validate();
  SOCPSpec out;
  out.n = spec.n;
  out.m = spec.constraints.front().perturbations.size();
  unsigned d = 1;
  for (const auto& c : spec.constraints) {
    std::vector<Polynomial> block;
    for (const auto& p : c.perturbations) block.push_back(quadratic_polynomial(spec.n, p));
    block.push_back(-quadratic_polynomial(spec.n, c.nominal));
    for (const auto& p : block) d = std::max(d, p.degree());
    out.blocks.push_back(std::move(block));
  }
  out.d = d;
  return out;
}

CertificatePolynomial build_certificate_polynomial(const ParametricSystem& sys, double phi_bar) {
  sys.validate();
  if (sys.L != 1) throw ArgumentError("build_certificate_polynomial: needs L = 1 (collapse first)");
  if (!std::isfinite(phi_bar)) throw ArgumentError("build_certificate_polynomial: phi_bar must be finite");
  CertificatePolynomial out;
  auto& lay = out.layout;
  lay.n = sys.n;
  lay.m = sys.m;
  lay.r = sys.r();
  lay.s = sys.s();
  const std::size_t N = lay.num_vars();
  const std::size_t n = sys.n, m = sys.m;

  Polynomial P(N);
  for (std::size_t q = 0; q <= n; ++q) {
    // (x, y) ↦ (x, y^(q))
    std::vector<std::size_t> map(n + m);
    for (std::size_t i = 0; i < n; ++i) map[i] = lay.x(i);
    for (std::size_t k = 0; k < m; ++k) map[n + k] = lay.y(q, k);

    Polynomial weight(N);
    if (q < n) {
      weight = Polynomial::variable(N, lay.gamma(q));
    } else {
      weight = Polynomial::constant(N, 1);
      for (std::size_t k = 0; k < n; ++k) weight -= Polynomial::variable(N, lay.gamma(k));
    }
    P -= weight * sys.objectives[0].embed(N, map);
    for (std::size_t i = 0; i < lay.r; ++i) {
      Exponent e(N, 0);
      e[lay.mu(q, i)] = 2;
      P += Polynomial::monomial(N, e, 1) * sys.Y.ineqs[i].embed(N, map);
    }
    for (std::size_t j = 0; j < lay.s; ++j) {
      P += Polynomial::variable(N, lay.kappa(q, j)) * sys.Y.eqs[j].embed(N, map);
    }
  }
  out.phi_bar = best_rational_approximation(phi_bar, 1'000'000'000ULL);
  out.phi_bar_error = std::abs(out.phi_bar.get_d() - phi_bar);
  P += Polynomial::constant(N, out.phi_bar);
  if (P.degree() > sys.d + 2) throw SolverError("build_certificate_polynomial: degree exceeds d+2");
  out.P = std::move(P);
  return out;
}

}  // namespace polyeb
