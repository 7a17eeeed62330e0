#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "polyeb/cli.hpp"
#include "polyeb/errors.hpp"
#include "polyeb/io.hpp"

using namespace polyeb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "polyeb_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("system JSON round trip is exact") {
  ParametricSystem sys = fixtures::gsip_interval_system();
  sys.objectives[0].add_term({1, 0}, Rational(1, 3));
  sys.d = 2;
  const fs::path p = scratch("sys.json");
  save_system(sys, p.string());
  CHECK(load_system(p.string()) == sys);
  ParametricSystem red = fixtures::square_system();
  ExponentQuery q;
  q.setting = Setting::PMI_4_6;
  q.n = 1;
  q.m = 1;
  q.d = 1;
  red.origin = q;
  CHECK(system_from_json(system_to_json(red)) == red);
}

TEST_CASE("malformed inputs name the field") {
  json j = system_to_json(fixtures::square_system());
  j.erase("x_box");
  try {
    system_from_json(j);
    FAIL("expected an ArgumentError");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("x_box") != std::string::npos);
  }
  const json bad_poly = json::parse(R"({"vars": ["x1"], "terms": [{"c": "1/0", "e": [1]}]})");
  CHECK_THROWS_AS(polynomial_from_json(bad_poly, "g"), ArgumentError);
  const json wrong_arity = json::parse(R"({"vars": ["x1"], "terms": [{"c": "1", "e": [1, 2]}]})");
  CHECK_THROWS_AS(polynomial_from_json(wrong_arity, "g"), ArgumentError);
  const fs::path p = scratch("broken.json");
  std::ofstream(p) << "{ not json";
  CHECK_THROWS_AS(read_json_file(p.string()), ArgumentError);
}

TEST_CASE("convex sets and gallery files parse") {
  const auto sets = fixtures::parabola_halfplane();
  REQUIRE(sets.size() == 2);
  CHECK(sets[0].kind() == "sublevel");
  CHECK(sets[1].kind() == "halfspace");
  for (const auto& c : sets) CHECK(convex_set_from_json(convex_set_to_json(c), "s").kind() == c.kind());
  const PmiInput in = pmi_input_from_json(read_json_file(fixtures::gallery("example_4_5")));
  CHECK(in.P.size() == 3);
  CHECK(in.x_box.dim() == 2);
}

TEST_CASE("exponent subcommand prints the exact value") {
  const Run r = run({"exponent", "--setting", "PMI_4_6", "--n", "1", "--m", "2", "--d", "1"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["exponent_report"]["exponent"] == "1/19131876");
  CHECK(j["tool"] == "polyeb");
  CHECK(j["version"] == cli::version());
  CHECK(j.contains("seed"));
  CHECK(j.contains("command_line"));
}

TEST_CASE("usage errors exit with 2 and a JSON error") {
  CHECK(run({"exponent", "--setting", "PMI_4_6", "--bogus"}).code == cli::kUsage);
  CHECK(run({"exponent", "--setting", "NOPE", "--n", "1"}).code == cli::kUsage);
  const Run r = run({"exponent", "--setting", "PMI_4_6", "--n", "1", "--m", "2"});
  CHECK(r.code == cli::kUsage);
  CHECK(json::parse(r.err).contains("error"));
  CHECK(run({"eval-sup", "--system", "/nonexistent.json", "--x", "0"}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
}

TEST_CASE("eval-sup, slope and flow on a saved system") {
  const fs::path p = scratch("abs.json");
  save_system(fixtures::abs_system(), p.string());
  const Run s = run({"eval-sup", "--system", p.string(), "--x", "-0.25"});
  REQUIRE(s.code == cli::kOk);
  CHECK(json::parse(s.out)["result"]["value"].get<double>() == doctest::Approx(0.25));
  const Run m = run({"slope", "--system", p.string(), "--x", "0.5"});
  REQUIRE(m.code == cli::kOk);
  CHECK(json::parse(m.out)["result"]["slope"].get<double>() == doctest::Approx(1.0));
  const fs::path csv = scratch("flow.csv");
  const Run f = run({"flow", "--system", p.string(), "--x0", "0.3", "--horizon", "0.5", "--csv", csv.string()});
  CHECK(f.code == cli::kOk);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("t,", 0) == 0);
}

TEST_CASE("reduce writes a loadable system carrying its origin") {
  const fs::path out = scratch("pmi_scalar.json");
  const Run r = run({"reduce", "--kind", "pmi", "--in", fixtures::gallery("example_6_1"), "--out", out.string()});
  REQUIRE(r.code == cli::kOk);
  const ParametricSystem sys = load_system(out.string());
  REQUIRE(sys.origin.has_value());
  CHECK(sys.origin->setting == Setting::PMI_4_6);
  CHECK(sys.m == 2);
}

TEST_CASE("cycle and counterexample subcommands") {
  const fs::path csv = scratch("cycle.csv");
  const Run c = run({"cycle", "--sets", fixtures::gallery("parabola_halfplane"), "--x0", "1,0.5", "--sweeps", "50",
                     "--report", csv.string()});
  REQUIRE(c.code == cli::kOk);
  CHECK(json::parse(c.out)["exponent_report"]["setting"] == "CYCLIC_6_3");
  const Run e = run({"counterexample", "--kmax", "1000"});
  REQUIRE(e.code == cli::kOk);
  CHECK(json::parse(e.out)["result"]["rows"].size() == 3);
}

TEST_CASE("examples list the gallery") {
  const Run r = run({"examples", "--list"});
  CHECK(r.code == cli::kOk);
  for (const auto& n : cli::gallery_names()) CHECK(r.out.find(n) != std::string::npos);
  CHECK(run({"examples", "--show", "example_6_1"}).code == cli::kOk);
  CHECK(run({"examples", "--show", "missing"}).code == cli::kUsage);
}
