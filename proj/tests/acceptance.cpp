// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 only when all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "polyeb/curve.hpp"
#include "polyeb/exponents.hpp"
#include "polyeb/feasibility.hpp"
#include "polyeb/flow.hpp"
#include "polyeb/io.hpp"
#include "polyeb/marginal.hpp"
#include "polyeb/min_norm.hpp"
#include "polyeb/reductions.hpp"
#include "polyeb/symmetric_eigen.hpp"
#include "polyeb/verify.hpp"

using namespace polyeb;
using fixtures::poly;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

Rational inv(const char* den) { return Rational(BigInt(1), BigInt(den)); }

ExponentQuery q(Setting s, std::optional<long> n, std::optional<long> m, std::optional<long> r,
                std::optional<long> sv, std::optional<long> d, std::optional<long> L) {
  ExponentQuery e;
  e.setting = s;
  e.n = n;
  e.m = m;
  e.r = r;
  e.s = sv;
  e.d = d;
  e.L = L;
  return e;
}

// ---------------------------------------------------------------------------

void criterion1(Outcome& o) {
  using S = Setting;
  const std::nullopt_t no = std::nullopt;
  struct Case {
    ExponentQuery query;
    Rational expected;
  };
  const std::vector<Case> cases{
      {q(S::LOJA_3_5, 1, 1, 0, 0, 2, no), inv("2916")},
      {q(S::LOJA_EQ_3_6, 1, 1, no, 1, 2, no), inv("23328")},
      {q(S::EB_4_2, 1, 1, 1, 0, 2, 2), inv("25798901760")},
      {q(S::EB_EQ_4_3, 1, 1, 0, 1, 2, 2), inv("1549681956")},
      {q(S::EB_CONST_4_4, 1, 1, 0, 1, 2, 2), inv("25798901760")},
      {q(S::PMI_4_6, 1, 2, no, no, 1, no), inv("19131876")},
      {q(S::GSIP_5_1, 1, 1, 0, 1, 2, 1), inv("25798901760")},
      {q(S::GSIP_SHARP_5_2R, 1, 1, 0, 1, 2, 1), inv("1549681956")},
      {q(S::PMI_STAB_5_2, 1, 1, no, no, 1, no), inv("25798901760")},
      {q(S::SOCP_5_3, 1, 1, no, no, 1, 1), inv("30233088")},
      {q(S::CYCLIC_6_3, 1, 1, no, no, 1, 1), inv("78730")},
      {q(S::FLOW_6_5, 1, 1, 0, 1, 1, no), Rational(23327, 23328)},
  };
  o.check(cases.size() == all_settings().size(), "one case per setting");
  for (const auto& c : cases) {
    const Rational got = exponent_for(c.query).exponent;
    o.check(got == c.expected, setting_name(c.query.setting) + " = " + to_string(got));
  }
  o.check(calc_R(4, 4) == 2916, "R(4,4)");
  o.check(calc_R(7, 1) == 1, "R(n,1)");
  int consistency = 0;
  for (long n = 1; n <= 3; ++n) {
    for (long d : {1L, 2L, 4L}) {
      const long m = 2 * n - 1;
      const bool ok = calc_R(2 * n + (m + 1) * (n + 1), d + 3) == calc_R(2 * n * n + 4 * n, d + 3);
      o.check(ok, "example_4_5 consistency n=" + std::to_string(n));
      ++consistency;
      const ExponentReport pmi = exponent_for(q(S::PMI_4_6, n, m, no, no, d, no));
      o.check(pmi.R_value == calc_R(2 * n * n + 4 * n, d + 3), "PMI_4_6 at m = 2n-1");
    }
  }
  const auto b = example45_bounds(1, 2);
  o.check(b.lower == Rational(1, 4) && b.upper == Rational(1, 2), "example_4_5 interval");
  o.check(b.corollary == inv("1244160"), "example_4_5 corollary value");
  o.detail << cases.size() << " settings exact, " << consistency << " consistency identities";
}

void criterion2(Outcome& o) {
  // the gallery file is part of the fixture: it must parse and agree with the built-in curve
  const json g = read_json_file(fixtures::gallery("example_1_1"));
  o.check(g.at("kind") == "curve", "gallery kind");
  const auto rep = counterexample_1_1(1'000'000);
  for (const auto& row : rep.rows) {
    if (row.k > 1000) continue;
    const double scaled = row.residual * static_cast<double>(row.k + 1);
    o.check(std::abs(scaled - 1.0) <= 1e-6, "residual*(k+1) at k=" + std::to_string(row.k));
  }
  o.check(rep.monotone, "ratio columns increase");
  o.check(rep.growth_checked && rep.growth_ok, "growth >= 1e3 from 1e1 to 1e6");
  // closed-form oracle for the ratio columns
  for (const auto& row : rep.rows) {
    for (std::size_t t = 0; t < rep.taus.size(); ++t) {
      const double oracle = example11_ratio(row.k, rep.taus[t]);
      o.check(std::abs(row.ratios[t] / oracle - 1.0) < 1e-4, "ratio matches closed form");
    }
  }
  o.detail << rep.rows.size() << " rows, growth(tau=1) " << rep.growth[0];
}

void criterion3(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ParametricSystem sys = fixtures::square_system();
  const std::vector<double> xbar{0.0};
  const auto eb = verify_error_bound(sys, xbar, 200, 0.5, 0);
  const auto t1 = std::chrono::steady_clock::now();
  o.check(eb.points_used >= 150, "enough usable samples");
  o.check(eb.tau_emp >= 0.48 && eb.tau_emp <= 0.52, "tau_emp in [0.48,0.52]");
  o.check(eb.c >= 0.9 && eb.c <= 1.1, "c in [0.9,1.1]");
  o.check(eb.verdict, "closed-form verdict");

  const PmiInput in = pmi_input_from_json(read_json_file(fixtures::gallery("example_6_1")));
  const ParametricSystem pmi = pmi_to_scalar(in.P, in.x_box);
  o.check(pmi.origin && pmi.origin->setting == Setting::PMI_4_6, "origin recorded as PMI_4_6");
  const std::vector<double> xb{1.0, 1.0};
  const auto pe = verify_error_bound(pmi, xb, 200, 0.5, 0);
  const auto t2 = std::chrono::steady_clock::now();
  o.check(pe.verdict, "example_6_1 verdict");
  const double s1 = std::chrono::duration<double>(t1 - t0).count();
  const double s2 = std::chrono::duration<double>(t2 - t1).count();
  o.check(s1 < 60 && s2 < 60, "runtime under 60 s each");
  o.detail << "tau_emp " << eb.tau_emp << ", c " << eb.c << " (" << s1 << " s); example_6_1 tau_emp " << pe.tau_emp
           << " vs " << to_string(pe.theory.exponent) << " (" << s2 << " s)";
}

void criterion4(Outcome& o) {
  const ParametricSystem sys = fixtures::square_system();
  const std::vector<double> xbar{0.0};
  const auto rep = verify_loja(sys, xbar, 200, 0.5, 0);
  double half = -1;
  for (const auto& [e, r] : rep.min_ratio_extra) {
    if (e == 0.5) half = r;
  }
  o.check(half >= 1.9 && half <= 2.1, "min ratio at exponent 1/2 in [1.9,2.1]");
  o.check(rep.min_ratio_theory >= 1e-8, "theory-exponent ratio >= 1e-8");
  o.check(rep.verdict, "verdict");
  o.detail << "min ratio(1/2) " << half << ", theory ratio " << rep.min_ratio_theory << ", points "
           << rep.points_used;
}

void criterion5(Outcome& o) {
  const std::vector<ConvexSet> halfspaces{{Halfspace{{1.0, 0.0}, 0.0}}, {Halfspace{{0.0, 1.0}, 0.0}}};
  const std::vector<double> start{1.0, 1.0};
  const auto hs = cyclic_project(halfspaces, start, 2);
  o.check(hs.residuals.size() >= 2 && hs.residuals.back() <= 1e-12, "halfspace pair within 2 sweeps");

  const auto sets = fixtures::parabola_halfplane();
  const std::vector<double> x0{1.0, 0.5};
  const auto run = cyclic_project(sets, x0, 200);
  o.check(run.fejer_ok, "Fejer monotone");
  o.check(run.theory.has_value(), "dims audit");
  const double rho_theory = run.theory ? run.theory->exponent.get_d() : 1.0;
  o.check(!run.fit.degenerate && run.fit.exponent >= rho_theory, "rho_emp >= rho_theory");

  std::vector<std::vector<double>> traj;
  for (int k = 0; k <= 200; ++k) traj.push_back({k == 0 ? 10.0 : 3.0 * std::pow(k, -0.5)});
  const std::vector<double> zero{0.0};
  const auto syn = fit_rate(traj, zero);
  o.check(std::abs(syn.M - 3.0) <= 1e-9 && std::abs(syn.exponent - 0.5) <= 1e-9, "synthetic fit");
  o.detail << "halfspace residual " << hs.residuals.back() << "; parabola rho_emp " << run.fit.exponent
           << " vs " << rho_theory << ", fejer worst " << run.fejer_worst;
}

void criterion6(Outcome& o) {
  FlowOptions opt;
  opt.step = 1e-3;
  opt.horizon = 1.1;
  const ParametricSystem abs_sys = fixtures::abs_system();
  const std::vector<double> one{1.0};
  const FlowRun a = integrate_flow(abs_sys, one, opt);
  const double x_end = std::abs(a.x.back()[0]);
  o.check(x_end <= 2e-3, "|x| <= 2e-3 by t = 1.1");

  opt.horizon = 1.0;
  const ParametricSystem sq = fixtures::square_system();
  const FlowRun b = integrate_flow(sq, one, opt);
  std::size_t k1 = 0;
  for (std::size_t k = 0; k < b.t.size(); ++k) {
    if (std::abs(b.t[k] - 1.0) < std::abs(b.t[k1] - 1.0)) k1 = k;
  }
  const double err = std::abs(b.x[k1][0] - std::exp(-2.0 * b.t[k1]));
  o.check(std::abs(b.t[k1] - 1.0) < 1e-9 && err <= 5e-3, "x^2 flow matches exp(-2t)");

  for (const FlowRun* run : {&a, &b}) {
    for (std::size_t k = 0; k + 1 < run->phi.size(); ++k) {
      if (run->phi[k + 1] > run->phi[k] + 1e-8) {
        o.check(false, "dissipation at step " + std::to_string(k));
        break;
      }
    }
    for (std::size_t k = 0; k < run->energy_gap.size(); ++k) {
      if (run->smooth[k] && run->energy_gap[k] < -1e-6) {
        o.check(false, "energy identity at step " + std::to_string(k));
        break;
      }
    }
  }
  const Rational th_a = exponent_for(q(Setting::FLOW_6_5, 1, 1, 0, 1, 2, std::nullopt)).exponent;
  const Rational th_b = exponent_for(q(Setting::FLOW_6_5, 1, 1, 0, 1, 3, std::nullopt)).exponent;
  const auto ra = verify_flow_rates(a, th_a);
  const auto rb = verify_flow_rates(b, th_b);
  o.check(ra.pass, "|x| rates");
  o.check(rb.pass, "x^2 rates");
  o.detail << "|x(1.1)| " << x_end << ", |x(1)-e^-2| " << err << ", rates " << ra.distance.status << "/"
           << ra.value.status << ", " << rb.distance.status << "/" << rb.value.status;
}

void criterion7(Outcome& o) {
  std::mt19937_64 rng(7);
  // interpolation soundness: three objectives in (x, y)
  ParametricSystem sys = fixtures::single(poly(2, {{1, {1, 1}}}), {}, {poly(2, {{1, {0, 2}}, {-1, {0, 0}}})}, 2,
                                          Box::cube(1, -1.1, 1.1), Box::cube(1, -1.0, 1.0));
  sys.L = 3;
  sys.objectives = {poly(2, {{1, {1, 1}}}), poly(2, {{2, {2, 0}}, {-1, {0, 1}}}),
                    poly(2, {{Rational(1, 3), {0, 2}}, {5, {0, 0}}})};
  sys.validate();
  const ParametricSystem col = collapse_objectives(sys);
  std::uniform_int_distribution<int> num(-50, 50), den(1, 17);
  int interp = 0;
  for (int i = 0; i < 100; ++i) {
    Rational x(num(rng), den(rng)), y(num(rng), den(rng));
    x.canonicalize();
    y.canonicalize();
    for (unsigned l = 1; l <= 3; ++l) {
      const std::vector<Rational> pt{x, y, Rational(l)};
      const std::vector<Rational> xy{x, y};
      o.check(col.objectives[0].eval_exact(pt) == sys.objectives[l - 1].eval_exact(xy), "interpolation");
      o.check(col.Y.eqs.back().eval_exact(pt) == 0, "pin equality");
      ++interp;
    }
  }

  // PMI scalarization against λ_max
  MatrixPolynomial P(3, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i; j < 3; ++j) P.set(i, j, fixtures::random_polynomial(rng, 2, 2, 4));
  }
  const ParametricSystem ps = pmi_to_scalar(P, Box::cube(2, -1.0, 1.0));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double pmi_worst = 0;
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    const double lm = P.eval_matrix(x).matrix().selfadjointView<Eigen::Upper>().eigenvalues().maxCoeff();
    const double sv = sup_value(ps, x, 64, static_cast<std::uint64_t>(i)).value;
    pmi_worst = std::max(pmi_worst, std::abs(sv - lm));
  }
  o.check(pmi_worst <= 1e-6, "pmi_to_scalar vs lambda_max");

  // SOCP reduction against the direct cone residual
  SOCPSpec spec;
  spec.n = 2;
  spec.m = 2;
  spec.d = 2;
  for (int l = 0; l < 2; ++l) {
    std::vector<Polynomial> blk;
    for (int j = 0; j < 3; ++j) blk.push_back(fixtures::random_polynomial(rng, 2, 2, 3));
    spec.blocks.push_back(blk);
  }
  const ParametricSystem ss = socp_to_sup(spec, Box::cube(2, -1.0, 1.0));
  double socp_worst = 0;
  for (int i = 0; i < 20; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    double direct = -1e300;
    for (const auto& blk : spec.blocks) {
      const double a = blk[0].eval(x), b = blk[1].eval(x);
      direct = std::max(direct, std::hypot(a, b) - blk[2].eval(x));
    }
    socp_worst = std::max(socp_worst, std::abs(sup_value(ss, x, 64, static_cast<std::uint64_t>(i)).value - direct));
  }
  o.check(socp_worst <= 1e-6, "socp_to_sup vs direct norm");

  // certificate polynomial
  const ParametricSystem gs = fixtures::gsip_interval_system();
  const std::vector<double> xbar{0.3};
  const SupEvaluation ev = sup_value(gs, xbar, 64, 0);
  const CertificatePolynomial cert = build_certificate_polynomial(gs, ev.value);
  const auto lq = exponent_for(q(Setting::LOJA_3_5, 1, 1, 1, 0, 2, std::nullopt));
  o.check(cert.P.num_vars() == static_cast<std::size_t>(lq.R_arg_n), "certificate variable count");
  const auto& lay = cert.layout;
  const std::vector<double>& ystar = ev.maximizers.at(0).y;
  const auto fj = fj_multipliers(gs, xbar, ystar, 0);
  double k0_worst = 0;
  for (const auto& f : fj) {
    for (double w : {0.0, 0.25, 1.0}) {
      std::vector<double> pt(lay.num_vars(), 0.0);
      pt[lay.x(0)] = xbar[0];
      for (std::size_t qq = 0; qq <= lay.n; ++qq) {
        pt[lay.y(qq, 0)] = ystar[0];
        pt[lay.mu(qq, 0)] = std::sqrt(std::max(f.lambda[0], 0.0));
      }
      pt[lay.gamma(0)] = w;
      k0_worst = std::max(k0_worst, std::abs(cert.P.eval(pt)));
    }
  }
  o.check(!fj.empty() && k0_worst <= 1e-6, "|P| at K(0) points");
  o.detail << interp << " exact interpolations, pmi err " << pmi_worst << ", socp err " << socp_worst
           << ", |P| " << k0_worst;
}

void criterion8(Outcome& o) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double grad_worst = 0;
  for (int i = 0; i < 50; ++i) {
    const Polynomial p = fixtures::random_polynomial(rng, 3, 4, 6);
    const auto g = p.gradient();
    std::vector<double> x{u(rng), u(rng), u(rng)};
    for (std::size_t j = 0; j < 3; ++j) {
      const double h = 1e-5;
      auto xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (p.eval(xp) - p.eval(xm)) / (2 * h);
      grad_worst = std::max(grad_worst, std::abs(fd - g[j].eval(x)) / std::max(1.0, std::abs(fd)));
    }
  }
  o.check(grad_worst <= 1e-6, "gradient vs finite differences");

  double jac_worst = 0;
  std::uniform_int_distribution<int> size(1, 20);
  for (int i = 0; i < 100; ++i) {
    const int m = size(rng);
    Eigen::MatrixXd a(m, m);
    for (int r = 0; r < m; ++r) {
      for (int c = r; c < m; ++c) a(r, c) = a(c, r) = u(rng);
    }
    const auto ed = jacobi_eigen(SymmetricMatrix(a));
    for (int k = 0; k < m; ++k) {
      const Eigen::VectorXd v = ed.vectors.col(k);
      jac_worst = std::max(jac_worst, (a * v - ed.values(k) * v).norm());
    }
  }
  o.check(jac_worst <= 1e-11, "Jacobi residual");

  double wolfe_worst = 0;
  std::uniform_int_distribution<int> count(2, 5);
  for (int i = 0; i < 30; ++i) {
    std::vector<std::vector<double>> pts;
    const int k = count(rng);
    for (int j = 0; j < k; ++j) pts.push_back({u(rng) + 0.5, u(rng)});
    const auto mn = min_norm_point(pts);
    wolfe_worst = std::max(wolfe_worst, std::abs(std::hypot(mn[0], mn[1]) - fixtures::grid_min_norm(pts)));
  }
  o.check(wolfe_worst <= 1e-4, "Wolfe vs grid oracle");

  MatrixPolynomial P(2, 2);
  P.set(0, 0, poly(2, {{1, {2, 0}}, {-1, {0, 0}}}));
  P.set(0, 1, poly(2, {{Rational(1, 2), {1, 1}}}));
  P.set(1, 1, poly(2, {{1, {0, 2}}, {-1, {0, 0}}}));
  const std::vector<ConvexSet> sets{{Halfspace{{1.0, 2.0}, 0.5}},
                                    {Ball{{0.2, -0.1}, 0.8}},
                                    {Sublevel{poly(2, {{1, {2, 0}}, {2, {0, 2}}, {-1, {0, 0}}})}},
                                    {PmiSet{P, true}}};
  double vi_worst = 0, idem_worst = 0;
  for (const auto& c : sets) {
    std::vector<std::vector<double>> feas;
    while (feas.size() < 40) {
      std::vector<double> z{2 * u(rng), 2 * u(rng)};
      if (c.value(z) <= 0) feas.push_back(z);
    }
    for (int i = 0; i < 40; ++i) {
      const std::vector<double> x0{3 * u(rng), 3 * u(rng)};
      const auto p = project(c, x0);
      const auto pp = project(c, p);
      idem_worst = std::max(idem_worst, fixtures::norm2(p, pp));
      for (const auto& z : feas) {
        const double ip = (x0[0] - p[0]) * (z[0] - p[0]) + (x0[1] - p[1]) * (z[1] - p[1]);
        vi_worst = std::max(vi_worst, ip);
      }
    }
  }
  o.check(vi_worst <= 1e-8, "projection variational inequality");
  o.check(idem_worst <= 1e-10, "projection idempotence");
  o.detail << "grad " << grad_worst << ", jacobi " << jac_worst << ", wolfe " << wolfe_worst << ", VI "
           << vi_worst << ", idem " << idem_worst;
}

void criterion9(Outcome& o) {
  const ParametricSystem sys = fixtures::gsip_interval_system();
  const std::vector<double> ubar{0.0};
  const std::vector<double> mags{0.01, 0.02, 0.04, 0.08, 0.16, 0.32};
  const auto quad = gsip_stability_probe(sys, poly(1, {{1, {2}}}), ubar, mags, 0);
  const auto quart = gsip_stability_probe(sys, poly(1, {{1, {4}}}), ubar, mags, 0);
  o.check(quad.theory.query.setting == Setting::GSIP_5_1, "theory setting");
  o.check(quad.exponent >= 0.95 && quad.exponent <= 1.05, "quadratic exponent");
  o.check(quart.exponent >= 0.30 && quart.exponent <= 0.37, "quartic exponent");
  o.check(quad.verdict && quart.verdict, "verdicts");
  o.detail << "quadratic " << quad.exponent << ", quartic " << quart.exponent;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    void (*fn)(Outcome&);
    double budget_s;  // runtime limit
  };
  const std::vector<Criterion> criteria{{1, criterion1, 1},  {2, criterion2, 10}, {3, criterion3, 120},
                                        {4, criterion4, 30}, {5, criterion5, 60}, {6, criterion6, 30},
                                        {7, criterion7, 30}, {8, criterion8, 60}, {9, criterion9, 60}};
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < c.budget_s, "runtime budget");
    std::printf("criterion %d: %s (%.2f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
