#include "polyeb/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "polyeb/errors.hpp"

namespace polyeb {
namespace {

const json& at(const json& j, const std::string& key, const std::string& field) {
  if (!j.is_object()) throw ArgumentError(field + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ArgumentError((field.empty() ? key : field + "." + key) + ": missing");
  return *it;
}

std::string sub(const std::string& field, const std::string& key) { return field.empty() ? key : field + "." + key; }

std::string idx(const std::string& field, std::size_t i) { return field + "[" + std::to_string(i) + "]"; }

long get_int(const json& j, const std::string& field, long lo) {
  if (!j.is_number_integer()) throw ArgumentError(field + ": expected an integer");
  const long v = j.get<long>();
  if (v < lo) throw ArgumentError(field + ": must be at least " + std::to_string(lo));
  return v;
}

double get_double(const json& j, const std::string& field) {
  if (!j.is_number()) throw ArgumentError(field + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ArgumentError(field + ": must be finite");
  return v;
}

Rational get_rational(const json& j, const std::string& field) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.dump(), 10);
    if (j.is_number_float()) return parse_rational(j.dump());
  } catch (const ArgumentError& e) {
    throw ArgumentError(field + ": " + e.what());
  }
  throw ArgumentError(field + ": expected a rational string or number");
}

const json& get_array(const json& j, const std::string& field) {
  if (!j.is_array()) throw ArgumentError(field + ": expected an array");
  return j;
}

std::vector<double> get_vector(const json& j, const std::string& field) {
  std::vector<double> v;
  const auto& a = get_array(j, field);
  for (std::size_t i = 0; i < a.size(); ++i) v.push_back(get_double(a[i], idx(field, i)));
  return v;
}

json quad_to_json(std::size_t n, const QuadTriple& q) {
  json B = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < n; ++k) row.push_back(to_string(q.B[i * n + k]));
    B.push_back(row);
  }
  json b = json::array();
  for (const auto& v : q.b) b.push_back(to_string(v));
  return {{"B", B}, {"b", b}, {"beta", to_string(q.beta)}};
}

QuadTriple quad_from_json(const json& j, std::size_t n, const std::string& field) {
  QuadTriple q;
  const auto& B = get_array(at(j, "B", field), sub(field, "B"));
  if (B.size() != n) throw ArgumentError(sub(field, "B") + ": expected " + std::to_string(n) + " rows");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = get_array(B[i], idx(sub(field, "B"), i));
    if (row.size() != n) throw ArgumentError(idx(sub(field, "B"), i) + ": expected " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) q.B.push_back(get_rational(row[k], idx(idx(sub(field, "B"), i), k)));
  }
  const auto& b = get_array(at(j, "b", field), sub(field, "b"));
  if (b.size() != n) throw ArgumentError(sub(field, "b") + ": expected " + std::to_string(n) + " entries");
  for (std::size_t i = 0; i < n; ++i) q.b.push_back(get_rational(b[i], idx(sub(field, "b"), i)));
  q.beta = get_rational(at(j, "beta", field), sub(field, "beta"));
  return q;
}

}  // namespace

std::vector<std::string> default_names(std::size_t n, std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < m; ++i) names.push_back("y" + std::to_string(i + 1));
  return names;
}

json polynomial_to_json(const Polynomial& p, const std::vector<std::string>& names) {
  if (names.size() != p.num_vars()) throw ArgumentError("polynomial_to_json: wrong number of names");
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"c", to_string(c)}, {"e", e}});
  return {{"vars", names}, {"terms", terms}};
}

Polynomial polynomial_from_json(const json& j, const std::string& field, std::size_t expected_vars) {
  const auto& vars = get_array(at(j, "vars", field), sub(field, "vars"));
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!vars[i].is_string()) throw ArgumentError(idx(sub(field, "vars"), i) + ": expected a name");
  }
  const std::size_t nv = vars.size();
  if (expected_vars && nv != expected_vars) {
    throw ArgumentError(sub(field, "vars") + ": expected " + std::to_string(expected_vars) + " variables, got " +
                        std::to_string(nv));
  }
  Polynomial p(nv);
  const auto& terms = get_array(at(j, "terms", field), sub(field, "terms"));
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string tf = idx(sub(field, "terms"), t);
    const Rational c = get_rational(at(terms[t], "c", tf), sub(tf, "c"));
    const auto& ej = get_array(at(terms[t], "e", tf), sub(tf, "e"));
    if (ej.size() != nv) throw ArgumentError(sub(tf, "e") + ": exponent length must match vars");
    Exponent e(nv);
    for (std::size_t i = 0; i < nv; ++i) {
      const long v = get_int(ej[i], idx(sub(tf, "e"), i), 0);
      if (v > 1000) throw ArgumentError(idx(sub(tf, "e"), i) + ": exponent too large");
      e[i] = static_cast<std::uint32_t>(v);
    }
    p.add_term(e, c);
  }
  return p;
}

json box_to_json(const Box& b) {
  json out = json::array();
  for (std::size_t i = 0; i < b.dim(); ++i) out.push_back({b.lower[i], b.upper[i]});
  return out;
}

Box box_from_json(const json& j, const std::string& field) {
  const auto& a = get_array(j, field);
  Box b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& pair = get_array(a[i], idx(field, i));
    if (pair.size() != 2) throw ArgumentError(idx(field, i) + ": expected [lo, hi]");
    b.lower.push_back(get_double(pair[0], idx(idx(field, i), 0)));
    b.upper.push_back(get_double(pair[1], idx(idx(field, i), 1)));
  }
  b.validate(field);
  return b;
}

json system_to_json(const ParametricSystem& sys) {
  const auto names = default_names(sys.n, sys.m);
  json out;
  out["n"] = sys.n;
  out["m"] = sys.m;
  out["L"] = sys.L;
  out["d"] = sys.d;
  out["objectives"] = json::array();
  for (const auto& f : sys.objectives) out["objectives"].push_back(polynomial_to_json(f, names));
  json Y;
  Y["ineq"] = json::array();
  for (const auto& g : sys.Y.ineqs) Y["ineq"].push_back(polynomial_to_json(g, names));
  Y["eq"] = json::array();
  for (const auto& h : sys.Y.eqs) Y["eq"].push_back(polynomial_to_json(h, names));
  Y["box"] = box_to_json(sys.Y.box);
  out["Y"] = Y;
  out["x_box"] = box_to_json(sys.x_box);
  if (sys.origin) out["origin"] = query_to_json(*sys.origin);
  return out;
}

ParametricSystem system_from_json(const json& j) {
  if (!j.is_object()) throw ArgumentError("system: expected an object");
  ParametricSystem sys;
  sys.n = static_cast<std::size_t>(get_int(at(j, "n", ""), "n", 1));
  sys.m = static_cast<std::size_t>(get_int(at(j, "m", ""), "m", 1));
  sys.L = static_cast<unsigned>(get_int(at(j, "L", ""), "L", 1));
  sys.d = static_cast<unsigned>(get_int(at(j, "d", ""), "d", 1));
  const std::size_t nv = sys.n + sys.m;
  const auto& objs = get_array(at(j, "objectives", ""), "objectives");
  for (std::size_t l = 0; l < objs.size(); ++l) {
    sys.objectives.push_back(polynomial_from_json(objs[l], idx("objectives", l), nv));
  }
  const auto& Y = at(j, "Y", "");
  sys.Y.n = sys.n;
  sys.Y.m = sys.m;
  if (Y.contains("ineq")) {
    const auto& a = get_array(Y["ineq"], "Y.ineq");
    for (std::size_t i = 0; i < a.size(); ++i) sys.Y.ineqs.push_back(polynomial_from_json(a[i], idx("Y.ineq", i), nv));
  }
  if (Y.contains("eq")) {
    const auto& a = get_array(Y["eq"], "Y.eq");
    for (std::size_t i = 0; i < a.size(); ++i) sys.Y.eqs.push_back(polynomial_from_json(a[i], idx("Y.eq", i), nv));
  }
  sys.Y.box = box_from_json(at(Y, "box", "Y"), "Y.box");
  sys.x_box = box_from_json(at(j, "x_box", ""), "x_box");
  if (j.contains("origin")) {
    try {
      sys.origin = query_from_json(j["origin"]);
      sys.origin->validate();
    } catch (const ArgumentError& e) {
      throw ArgumentError(std::string("origin: ") + e.what());
    }
  }
  sys.validate();
  return sys;
}

json matrix_polynomial_to_json(const MatrixPolynomial& P) {
  const auto names = default_names(P.num_vars());
  json entries = json::array();
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t k = i; k < P.size(); ++k) {
      if (P.entry(i, k).is_zero()) continue;
      entries.push_back({{"i", i}, {"j", k}, {"p", polynomial_to_json(P.entry(i, k), names)}});
    }
  }
  return {{"size", P.size()}, {"num_vars", P.num_vars()}, {"entries", entries}};
}

MatrixPolynomial matrix_polynomial_from_json(const json& j, const std::string& field) {
  const auto size = static_cast<std::size_t>(get_int(at(j, "size", field), sub(field, "size"), 1));
  const auto nv = static_cast<std::size_t>(get_int(at(j, "num_vars", field), sub(field, "num_vars"), 1));
  MatrixPolynomial P(size, nv);
  const auto& entries = get_array(at(j, "entries", field), sub(field, "entries"));
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const std::string ef = idx(sub(field, "entries"), e);
    const auto i = static_cast<std::size_t>(get_int(at(entries[e], "i", ef), sub(ef, "i"), 0));
    const auto k = static_cast<std::size_t>(get_int(at(entries[e], "j", ef), sub(ef, "j"), 0));
    if (i >= size || k >= size) throw ArgumentError(ef + ": index out of range");
    P.set(i, k, polynomial_from_json(at(entries[e], "p", ef), sub(ef, "p"), nv));
  }
  return P;
}

json socp_to_json(const SOCPSpec& s) {
  const auto names = default_names(s.n);
  json blocks = json::array();
  for (const auto& b : s.blocks) {
    json arr = json::array();
    for (const auto& p : b) arr.push_back(polynomial_to_json(p, names));
    blocks.push_back(arr);
  }
  return {{"n", s.n}, {"m", s.m}, {"d", s.d}, {"blocks", blocks}};
}

SOCPSpec socp_from_json(const json& j, const std::string& field) {
  SOCPSpec s;
  s.n = static_cast<std::size_t>(get_int(at(j, "n", field), sub(field, "n"), 1));
  s.m = static_cast<std::size_t>(get_int(at(j, "m", field), sub(field, "m"), 1));
  s.d = static_cast<unsigned>(get_int(at(j, "d", field), sub(field, "d"), 1));
  const auto& blocks = get_array(at(j, "blocks", field), sub(field, "blocks"));
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    const std::string bf = idx(sub(field, "blocks"), l);
    std::vector<Polynomial> block;
    const auto& arr = get_array(blocks[l], bf);
    for (std::size_t k = 0; k < arr.size(); ++k) block.push_back(polynomial_from_json(arr[k], idx(bf, k), s.n));
    s.blocks.push_back(std::move(block));
  }
  s.validate();
  return s;
}

json robust_to_json(const RobustQuadSpec& s) {
  json cons = json::array();
  for (const auto& c : s.constraints) {
    json pert = json::array();
    for (const auto& p : c.perturbations) pert.push_back(quad_to_json(s.n, p));
    cons.push_back({{"nominal", quad_to_json(s.n, c.nominal)}, {"perturbations", pert}});
  }
  return {{"n", s.n}, {"constraints", cons}};
}

RobustQuadSpec robust_from_json(const json& j, const std::string& field) {
  RobustQuadSpec s;
  s.n = static_cast<std::size_t>(get_int(at(j, "n", field), sub(field, "n"), 1));
  const auto& cons = get_array(at(j, "constraints", field), sub(field, "constraints"));
  for (std::size_t l = 0; l < cons.size(); ++l) {
    const std::string cf = idx(sub(field, "constraints"), l);
    RobustConstraint c;
    c.nominal = quad_from_json(at(cons[l], "nominal", cf), s.n, sub(cf, "nominal"));
    const auto& pert = get_array(at(cons[l], "perturbations", cf), sub(cf, "perturbations"));
    for (std::size_t k = 0; k < pert.size(); ++k) {
      c.perturbations.push_back(quad_from_json(pert[k], s.n, idx(sub(cf, "perturbations"), k)));
    }
    s.constraints.push_back(std::move(c));
  }
  s.validate();
  return s;
}

json convex_set_to_json(const ConvexSet& c) {
  if (const auto* h = std::get_if<Halfspace>(&c.shape)) return {{"kind", "halfspace"}, {"a", h->a}, {"b", h->b}};
  if (const auto* b = std::get_if<Ball>(&c.shape)) {
    return {{"kind", "ball"}, {"center", b->center}, {"radius", b->radius}};
  }
  if (const auto* s = std::get_if<Sublevel>(&c.shape)) {
    return {{"kind", "sublevel"}, {"g", polynomial_to_json(s->g, default_names(s->g.num_vars()))}};
  }
  const auto& p = std::get<PmiSet>(c.shape);
  return {{"kind", "pmi"}, {"P", matrix_polynomial_to_json(p.P)}, {"convex", p.convex_declared}};
}

ConvexSet convex_set_from_json(const json& j, const std::string& field) {
  const auto& kind_j = at(j, "kind", field);
  if (!kind_j.is_string()) throw ArgumentError(sub(field, "kind") + ": expected a string");
  const std::string kind = kind_j.get<std::string>();
  ConvexSet c;
  if (kind == "halfspace") {
    c.shape = Halfspace{get_vector(at(j, "a", field), sub(field, "a")), get_double(at(j, "b", field), sub(field, "b"))};
  } else if (kind == "ball") {
    c.shape = Ball{get_vector(at(j, "center", field), sub(field, "center")),
                   get_double(at(j, "radius", field), sub(field, "radius"))};
  } else if (kind == "sublevel") {
    c.shape = Sublevel{polynomial_from_json(at(j, "g", field), sub(field, "g"))};
  } else if (kind == "pmi") {
    PmiSet p;
    p.P = matrix_polynomial_from_json(at(j, "P", field), sub(field, "P"));
    if (j.contains("convex")) {
      if (!j["convex"].is_boolean()) throw ArgumentError(sub(field, "convex") + ": expected a boolean");
      p.convex_declared = j["convex"].get<bool>();
    }
    c.shape = std::move(p);
  } else {
    throw ArgumentError(sub(field, "kind") + ": unknown set kind '" + kind + "'");
  }
  try {
    c.validate();
  } catch (const ArgumentError& e) {
    throw ArgumentError(field + ": " + e.what());
  }
  return c;
}

std::vector<ConvexSet> convex_sets_from_json(const json& j) {
  const auto& arr = get_array(at(j, "sets", ""), "sets");
  std::vector<ConvexSet> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(convex_set_from_json(arr[i], idx("sets", i)));
  if (out.empty()) throw ArgumentError("sets: at least one set required");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].dim() != out[0].dim()) throw ArgumentError(idx("sets", i) + ": dimension differs from sets[0]");
  }
  return out;
}

PmiInput pmi_input_from_json(const json& j) {
  PmiInput in;
  in.P = matrix_polynomial_from_json(at(j, "P", ""), "P");
  in.x_box = box_from_json(at(j, "x_box", ""), "x_box");
  if (in.x_box.dim() != in.P.num_vars()) throw ArgumentError("x_box: expected one interval per matrix variable");
  return in;
}

json sup_to_json(const SupEvaluation& e) {
  json mx = json::array();
  for (const auto& m : e.maximizers) mx.push_back({{"y", m.y}, {"objective", m.objective}, {"value", m.value}});
  return {{"value", e.value},          {"residual", e.residual}, {"maximizers", mx},
          {"starts", e.starts},        {"converged", e.converged}, {"samples", e.samples}};
}

json hull_to_json(const SubdifferentialHull& h) {
  json gens = json::array();
  for (const auto& g : h.generators) {
    json prov = json::array();
    for (const auto& [k, fj] : g.provenance) {
      prov.push_back({{"maximizer", k},
                      {"gamma", fj.gamma},
                      {"lambda", fj.lambda},
                      {"kappa", fj.kappa},
                      {"stationarity", fj.stationarity}});
    }
    gens.push_back({{"v", g.v}, {"gamma_total", g.gamma_total}, {"provenance", prov}});
  }
  return {{"generators", gens},
          {"alpha_violations", h.alpha_violations},
          {"degenerate_skipped", h.degenerate_skipped},
          {"alpha_cap", h.alpha_cap},
          {"approximation", h.approximation}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ArgumentError(path + ": cannot open file for writing");
  out << text;
  if (!out) throw ArgumentError(path + ": write failed");
}

ParametricSystem load_system(const std::string& path) {
  const json j = read_json_file(path);
  try {
    return system_from_json(j);
  } catch (const ArgumentError& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

void save_system(const ParametricSystem& sys, const std::string& path) {
  write_text_file(path, system_to_json(sys).dump(2) + "\n");
}

}  // namespace polyeb
