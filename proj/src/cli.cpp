#include "polyeb/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <sstream>

#include "polyeb/curve.hpp"
#include "polyeb/errors.hpp"
#include "polyeb/exponents.hpp"
#include "polyeb/feasibility.hpp"
#include "polyeb/flow.hpp"
#include "polyeb/io.hpp"
#include "polyeb/marginal.hpp"
#include "polyeb/parallel.hpp"
#include "polyeb/reductions.hpp"
#include "polyeb/verify.hpp"

#ifndef POLYEB_VERSION
#define POLYEB_VERSION "0.0.0"
#endif
#ifndef POLYEB_GALLERY_DIR
#define POLYEB_GALLERY_DIR "data/gallery"
#endif

namespace polyeb::cli {
namespace {

struct VerdictFailure {};

std::string csv_num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

struct Common {
  std::uint64_t seed = Defaults::seed;
  unsigned workers = 0;
  std::string command_line;
};

json envelope(const Common& c, const std::string& command) {
  return {{"tool", "polyeb"}, {"version", version()}, {"command", command}, {"command_line", c.command_line},
          {"seed", c.seed}};
}

void check_dim(const std::vector<double>& v, std::size_t n, const std::string& flag) {
  if (v.size() != n) {
    throw ArgumentError(flag + ": expected " + std::to_string(n) + " components, got " + std::to_string(v.size()));
  }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

}  // namespace

const char* version() { return POLYEB_VERSION; }

std::vector<std::string> gallery_names() {
  return {"example_1_1", "example_4_5", "example_6_1", "parabola_halfplane"};
}

std::string gallery_path(const std::string& name) {
  const auto names = gallery_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ArgumentError("unknown gallery entry '" + name + "'");
  }
  return std::string(POLYEB_GALLERY_DIR) + "/" + name + ".json";
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Common common;
  for (const auto& a : args) common.command_line += (common.command_line.empty() ? "" : " ") + a;

  CLI::App app{"Hölder and Łojasiewicz exponents for parametric polynomial systems", "polyeb"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());
  app.add_option("--workers", common.workers, "worker threads (0 = all cores)");

  std::function<void()> action;
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", common.seed, "random seed"); };

  // exponent
  std::string setting;
  std::optional<long> qn, qm, qr, qs, qd, qL;
  auto* exp_cmd = app.add_subcommand("exponent", "exact exponent for one setting");
  exp_cmd->add_option("--setting", setting)->required();
  exp_cmd->add_option("--n", qn);
  exp_cmd->add_option("--m", qm);
  exp_cmd->add_option("--r", qr);
  exp_cmd->add_option("--s", qs);
  exp_cmd->add_option("--d", qd);
  exp_cmd->add_option("--L", qL);
  exp_cmd->callback([&] {
    action = [&] {
      ExponentQuery q;
      q.setting = parse_setting(setting);
      q.n = qn;
      q.m = qm;
      q.r = qr;
      q.s = qs;
      q.d = qd;
      q.L = qL;
      const auto rep = exponent_for(q);
      json j = envelope(common, "exponent");
      j["exponent_report"] = to_json(rep);
      emit(out, j);
    };
  });

  // shared flags for system-based commands
  std::string system_path, csv_path;
  std::vector<double> xv, xbar, x0, ubar, magnitudes;
  std::size_t budget = Defaults::sup_budget, samples = Defaults::samples;
  double radius = Defaults::radius, slack = Defaults::slack;

  auto* sup_cmd = app.add_subcommand("eval-sup", "evaluate the sup marginal function at x");
  sup_cmd->add_option("--system", system_path)->required()->check(CLI::ExistingFile);
  sup_cmd->add_option("--x", xv)->required()->delimiter(',');
  sup_cmd->add_option("--budget", budget);
  add_seed(sup_cmd);
  sup_cmd->callback([&] {
    action = [&] {
      const auto sys = load_system(system_path);
      check_dim(xv, sys.n, "--x");
      const CompiledSystem cs(sys);
      SupOptions so;
      so.budget = budget;
      so.seed = common.seed;
      json j = envelope(common, "eval-sup");
      j["result"] = sup_to_json(sup_value(cs, xv, so));
      emit(out, j);
    };
  });

  auto* slope_cmd = app.add_subcommand("slope", "least-norm element of the subdifferential hull at x");
  slope_cmd->add_option("--system", system_path)->required()->check(CLI::ExistingFile);
  slope_cmd->add_option("--x", xv)->required()->delimiter(',');
  slope_cmd->add_option("--budget", budget);
  add_seed(slope_cmd);
  slope_cmd->callback([&] {
    action = [&] {
      const auto sys = load_system(system_path);
      check_dim(xv, sys.n, "--x");
      const CompiledSystem cs(sys);
      SupOptions so;
      so.budget = budget;
      so.seed = common.seed;
      const auto s = slope_detail(cs, xv, kDefaultAlphaCap, so);
      json j = envelope(common, "slope");
      j["result"] = {{"slope", s.slope}, {"min_norm", s.min_norm}, {"phi", s.phi}, {"hull", hull_to_json(s.hull)}};
      emit(out, j);
    };
  });

  // reduce
  std::string kind, in_path, out_path;
  auto* red_cmd = app.add_subcommand("reduce", "system transformations");
  red_cmd->add_option("--kind", kind)->required()->check(CLI::IsMember({"collapse", "pmi", "socp", "robust"}));
  red_cmd->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
  red_cmd->add_option("--out", out_path)->required();
  red_cmd->callback([&] {
    action = [&] {
      const json in = read_json_file(in_path);
      json j = envelope(common, "reduce");
      j["kind"] = kind;
      auto finish = [&](const ParametricSystem& sys) {
        save_system(sys, out_path);
        j["output"] = {{"n", sys.n}, {"m", sys.m}, {"r", sys.r()}, {"s", sys.s()}, {"d", sys.d}, {"L", sys.L}};
        if (sys.origin) j["exponent_report"] = to_json(exponent_for(*sys.origin));
      };
      try {
        if (kind == "collapse") {
          finish(collapse_objectives(system_from_json(in)));
        } else if (kind == "pmi") {
          const auto p = pmi_input_from_json(in);
          finish(pmi_to_scalar(p.P, p.x_box));
        } else if (kind == "socp") {
          const auto spec = socp_from_json(in, "");
          const Box box = box_from_json(in.at("x_box"), "x_box");
          finish(socp_to_sup(spec, box));
        } else {
          const auto spec = robustify_quadratic(robust_from_json(in, ""));
          json o = socp_to_json(spec);
          if (in.contains("x_box")) o["x_box"] = in["x_box"];
          write_text_file(out_path, o.dump(2) + "\n");
          j["output"] = {{"n", spec.n}, {"m", spec.m}, {"d", spec.d}, {"L", spec.L()}};
        }
      } catch (const json::exception& e) {
        throw ArgumentError(in_path + ": " + e.what());
      }
      emit(out, j);
    };
  });

  // verify-eb
  std::size_t grid = 0;
  auto* eb_cmd = app.add_subcommand("verify-eb", "sample the error bound near xbar");
  eb_cmd->add_option("--system", system_path)->required()->check(CLI::ExistingFile);
  eb_cmd->add_option("--xbar", xbar)->required()->delimiter(',');
  eb_cmd->add_option("--samples", samples);
  eb_cmd->add_option("--radius", radius);
  eb_cmd->add_option("--grid", grid, "distance-oracle points per axis");
  eb_cmd->add_option("--budget", budget);
  eb_cmd->add_option("--slack", slack);
  eb_cmd->add_option("--csv", csv_path);
  add_seed(eb_cmd);
  eb_cmd->callback([&] {
    action = [&] {
      const auto sys = load_system(system_path);
      check_dim(xbar, sys.n, "--xbar");
      ErrorBoundOptions o;
      o.grid_per_axis = grid;
      o.sup_budget = budget;
      o.slack = slack;
      const auto rep = verify_error_bound(sys, xbar, samples, radius, common.seed, o);
      json j = envelope(common, "verify-eb");
      j["exponent_report"] = to_json(rep.theory);
      j["result"] = {{"tau_emp", rep.tau_emp},         {"c", rep.c},
                     {"points_used", rep.points_used}, {"zero_residual", rep.zero_residual},
                     {"no_information", rep.no_information}, {"slack", rep.slack},
                     {"grid_spacing", rep.grid_spacing}, {"verdict", rep.verdict}};
      if (!csv_path.empty()) {
        auto header = numbered("x", sys.n);
        header.insert(header.end(), {"residual", "dist"});
        Csv csv(header);
        for (const auto& r : rep.rows) {
          std::vector<std::string> cells;
          for (double v : r.x) cells.push_back(csv_num(v));
          cells.push_back(csv_num(r.residual));
          cells.push_back(csv_num(r.dist));
          csv.row(cells);
        }
        write_text_file(csv_path, csv.str());
      }
      emit(out, j);
      if (!rep.verdict) throw VerdictFailure{};
    };
  });

  auto* loja_cmd = app.add_subcommand("verify-loja", "sample the slope inequality near xbar");
  loja_cmd->add_option("--system", system_path)->required()->check(CLI::ExistingFile);
  loja_cmd->add_option("--xbar", xbar)->required()->delimiter(',');
  loja_cmd->add_option("--samples", samples);
  loja_cmd->add_option("--radius", radius);
  loja_cmd->add_option("--budget", budget);
  loja_cmd->add_option("--csv", csv_path);
  add_seed(loja_cmd);
  loja_cmd->callback([&] {
    action = [&] {
      const auto sys = load_system(system_path);
      check_dim(xbar, sys.n, "--xbar");
      LojaOptions o;
      o.sup_budget = budget;
      const auto rep = verify_loja(sys, xbar, samples, radius, common.seed, o);
      json j = envelope(common, "verify-loja");
      j["exponent_report"] = to_json(rep.theory);
      json extra = json::array();
      for (const auto& [e, r] : rep.min_ratio_extra) extra.push_back({{"exponent", e}, {"min_ratio", r}});
      j["result"] = {{"phi_bar", rep.phi_bar},
                     {"min_ratio_theory", rep.min_ratio_theory},
                     {"min_ratio_extra", extra},
                     {"one_minus_tau_emp", rep.one_minus_tau_emp},
                     {"points_used", rep.points_used},
                     {"no_information", rep.no_information},
                     {"verdict", rep.verdict}};
      if (!csv_path.empty()) {
        auto header = numbered("x", sys.n);
        header.insert(header.end(), {"slope", "dphi"});
        Csv csv(header);
        for (const auto& r : rep.rows) {
          std::vector<std::string> cells;
          for (double v : r.x) cells.push_back(csv_num(v));
          cells.push_back(csv_num(r.slope));
          cells.push_back(csv_num(r.dphi));
          csv.row(cells);
        }
        write_text_file(csv_path, csv.str());
      }
      emit(out, j);
      if (!rep.verdict) throw VerdictFailure{};
    };
  });

  long k_max = Defaults::counterexample_k_max;
  auto* ce_cmd = app.add_subcommand("counterexample", "error-bound failure on the curve index set");
  ce_cmd->add_option("--kmax", k_max);
  ce_cmd->add_option("--csv", csv_path);
  ce_cmd->callback([&] {
    action = [&] {
      const auto rep = counterexample_1_1(k_max);
      json j = envelope(common, "counterexample");
      json rows = json::array();
      Csv csv({"k", "x", "dist", "residual", "closed_form", "ratio_tau_1", "ratio_tau_1/2", "ratio_tau_1/4"});
      for (const auto& r : rep.rows) {
        rows.push_back({{"k", r.k},
                        {"x", r.x},
                        {"dist", r.dist},
                        {"residual", r.residual},
                        {"closed_form", r.closed_form},
                        {"relative_error", r.relative_error},
                        {"ratios", r.ratios}});
        csv.row({std::to_string(r.k), csv_num(r.x), csv_num(r.dist), csv_num(r.residual), csv_num(r.closed_form),
                 csv_num(r.ratios[0]), csv_num(r.ratios[1]), csv_num(r.ratios[2])});
      }
      j["result"] = {{"taus", {"1", "1/2", "1/4"}}, {"rows", rows},
                     {"residual_ok", rep.residual_ok}, {"monotone", rep.monotone},
                     {"growth", rep.growth}, {"growth_checked", rep.growth_checked},
                     {"growth_ok", rep.growth_ok}};
      if (!csv_path.empty()) write_text_file(csv_path, csv.str());
      emit(out, j);
      if (!rep.residual_ok || !rep.monotone || (rep.growth_checked && !rep.growth_ok)) throw VerdictFailure{};
    };
  });

  std::string p0_path;
  std::size_t gsip_grid = Defaults::gsip_grid;
  auto* gsip_cmd = app.add_subcommand("gsip-probe", "solution-set stability under tilt perturbations");
  gsip_cmd->add_option("--system", system_path)->required()->check(CLI::ExistingFile);
  gsip_cmd->add_option("--p0", p0_path, "JSON polynomial in the x variables")->required()->check(CLI::ExistingFile);
  gsip_cmd->add_option("--ubar", ubar)->delimiter(',');
  gsip_cmd->add_option("--magnitudes", magnitudes)->required()->delimiter(',');
  gsip_cmd->add_option("--grid", gsip_grid);
  gsip_cmd->add_option("--budget", budget);
  gsip_cmd->add_option("--csv", csv_path);
  add_seed(gsip_cmd);
  gsip_cmd->callback([&] {
    action = [&] {
      const auto sys = load_system(system_path);
      const Polynomial p0 = polynomial_from_json(read_json_file(p0_path), "p0", sys.n);
      if (ubar.empty()) ubar.assign(sys.n, 0.0);
      check_dim(ubar, sys.n, "--ubar");
      GsipProbeOptions o;
      o.grid_per_axis = gsip_grid;
      o.sup_budget = budget;
      const auto rep = gsip_stability_probe(sys, p0, ubar, magnitudes, common.seed, o);
      json j = envelope(common, "gsip-probe");
      j["exponent_report"] = to_json(rep.theory);
      json rows = json::array();
      Csv csv({"magnitude", "excess", "optimum", "solutions"});
      for (const auto& r : rep.rows) {
        rows.push_back({{"magnitude", r.magnitude}, {"excess", r.excess}, {"optimum", r.optimum},
                        {"solutions", r.solutions}});
        csv.row({csv_num(r.magnitude), csv_num(r.excess), csv_num(r.optimum), std::to_string(r.solutions.size())});
      }
      j["result"] = {{"rows", rows},          {"exponent", rep.exponent}, {"c", rep.c},
                     {"degenerate", rep.degenerate}, {"verdict", rep.verdict},
                     {"base_solutions", rep.base_solutions}, {"excess_kind", "empirical excess"}};
      if (!csv_path.empty()) write_text_file(csv_path, csv.str());
      emit(out, j);
      if (!rep.verdict) throw VerdictFailure{};
    };
  });

  std::string sets_path;
  std::size_t sweeps = Defaults::sweeps;
  auto* cyc_cmd = app.add_subcommand("cycle", "cyclic projections onto convex sets");
  cyc_cmd->add_option("--sets", sets_path)->required()->check(CLI::ExistingFile);
  cyc_cmd->add_option("--x0", x0)->required()->delimiter(',');
  cyc_cmd->add_option("--sweeps", sweeps);
  cyc_cmd->add_option("--report", csv_path);
  add_seed(cyc_cmd);
  cyc_cmd->callback([&] {
    action = [&] {
      const auto sets = convex_sets_from_json(read_json_file(sets_path));
      check_dim(x0, sets.front().dim(), "--x0");
      const auto run = cyclic_project(sets, x0, sweeps, Defaults::cycle_tol, true);
      json j = envelope(common, "cycle");
      if (run.theory) j["exponent_report"] = to_json(*run.theory);
      json badges = json::array();
      for (const auto& c : sets) {
        if (!c.declared_convex()) badges.push_back(c.kind() + ": convexity not declared; projection may stall");
        else if (c.kind() == "sublevel" || c.kind() == "pmi") badges.push_back(c.kind() + ": convexity declared");
      }
      j["result"] = {{"sweeps_done", run.sweeps_done},
                     {"converged", run.converged},
                     {"final_iterate", run.final_iterate},
                     {"limit_estimate", run.limit_estimate},
                     {"fejer_ok", run.fejer_ok},
                     {"rho_emp", run.fit.exponent},
                     {"M", run.fit.M},
                     {"fit_degenerate", run.fit.degenerate},
                     {"fit_note", run.fit.note},
                     {"notes", badges}};
      if (!csv_path.empty()) {
        auto header = std::vector<std::string>{"sweep"};
        for (const auto& h : numbered("x", x0.size())) header.push_back(h);
        for (const auto& h : numbered("dist_C", sets.size())) header.push_back(h);
        header.push_back("residual");
        Csv csv(header);
        for (std::size_t k = 0; k < run.iterates.size(); ++k) {
          std::vector<std::string> cells{std::to_string(k)};
          for (double v : run.iterates[k]) cells.push_back(csv_num(v));
          for (double v : run.set_distances[k]) cells.push_back(csv_num(v));
          cells.push_back(csv_num(run.residuals[k]));
          csv.row(cells);
        }
        write_text_file(csv_path, csv.str());
      }
      emit(out, j);
    };
  });

  double step = Defaults::flow_step, horizon = Defaults::flow_horizon;
  auto* flow_cmd = app.add_subcommand("flow", "subgradient flow of the sup marginal function");
  flow_cmd->add_option("--system", system_path)->required()->check(CLI::ExistingFile);
  flow_cmd->add_option("--x0", x0)->required()->delimiter(',');
  flow_cmd->add_option("--step", step);
  flow_cmd->add_option("--horizon", horizon);
  flow_cmd->add_option("--budget", budget);
  flow_cmd->add_option("--csv", csv_path);
  add_seed(flow_cmd);
  flow_cmd->callback([&] {
    action = [&] {
      const auto sys = load_system(system_path);
      check_dim(x0, sys.n, "--x0");
      const auto run = integrate_flow(sys, x0, step, horizon, budget, common.seed);
      ExponentQuery q;
      q.setting = Setting::FLOW_6_5;
      q.n = static_cast<long>(sys.n);
      q.m = static_cast<long>(sys.m);
      q.r = static_cast<long>(sys.r());
      q.s = static_cast<long>(sys.s());
      q.d = static_cast<long>(sys.d);
      const auto theory = exponent_for(q);
      const auto rates = verify_flow_rates(run, theory.exponent);
      json j = envelope(common, "flow");
      j["exponent_report"] = to_json(theory);
      auto rate_json = [](const RateCheck& r) {
        return json{{"exponent", r.fit.exponent}, {"theory", r.theory}, {"status", r.status}, {"pass", r.pass}};
      };
      j["result"] = {{"steps", run.step_used.size()},
                     {"converged", run.converged},
                     {"xbar", run.xbar},
                     {"phi_bar", run.phi_bar},
                     {"distance_rate", rate_json(rates.distance)},
                     {"value_rate", rate_json(rates.value)},
                     {"min_slope_ratio", rates.min_slope_ratio},
                     {"kink_adjacent_steps", rates.kink_adjacent_steps},
                     {"pass", rates.pass}};
      if (!csv_path.empty()) {
        auto header = std::vector<std::string>{"t"};
        for (const auto& h : numbered("x", sys.n)) header.push_back(h);
        header.insert(header.end(), {"phi", "slope"});
        Csv csv(header);
        for (std::size_t k = 0; k < run.t.size(); ++k) {
          std::vector<std::string> cells{csv_num(run.t[k])};
          for (double v : run.x[k]) cells.push_back(csv_num(v));
          cells.push_back(csv_num(run.phi[k]));
          cells.push_back(csv_num(run.slope[k]));
          csv.row(cells);
        }
        write_text_file(csv_path, csv.str());
      }
      emit(out, j);
      if (!rates.pass) throw VerdictFailure{};
    };
  });

  bool list = false;
  std::string show;
  auto* ex_cmd = app.add_subcommand("examples", "bundled gallery files");
  ex_cmd->add_flag("--list", list);
  ex_cmd->add_option("--show", show);
  ex_cmd->callback([&] {
    action = [&] {
      if (!show.empty()) {
        out << read_json_file(gallery_path(show)).dump(2) << "\n";
        return;
      }
      for (const auto& n : gallery_names()) out << n << "\n";
    };
  });

  auto fail = [&](const std::string& kind, const std::string& message, int code) {
    err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kUsage);
  }
  set_default_workers(common.workers);
  try {
    if (action) action();
    return kOk;
  } catch (const VerdictFailure&) {
    return kVerdictFailed;
  } catch (const ArgumentError& e) {
    return fail("usage", e.what(), kUsage);
  } catch (const SolverError& e) {
    return fail("solver", e.what(), kSolver);
  } catch (const std::exception& e) {
    return fail("solver", e.what(), kSolver);
  }
}

}  // namespace polyeb::cli
