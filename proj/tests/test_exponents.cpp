#include <doctest.h>

#include "polyeb/errors.hpp"
#include "polyeb/exponents.hpp"

using namespace polyeb;

namespace {

// independent oracle: repeated multiplication in GMP integers
BigInt oracle_R(long n, long d) {
  if (d == 1) return 1;
  BigInt p = 1;
  for (long i = 0; i < n - 1; ++i) p *= 3 * d - 3;
  return p * d;
}

ExponentQuery make(Setting s, std::initializer_list<std::pair<char, long>> dims) {
  ExponentQuery q;
  q.setting = s;
  for (auto [c, v] : dims) {
    switch (c) {
      case 'n': q.n = v; break;
      case 'm': q.m = v; break;
      case 'r': q.r = v; break;
      case 's': q.s = v; break;
      case 'd': q.d = v; break;
      default: q.L = v;
    }
  }
  return q;
}

}  // namespace

TEST_CASE("R against the oracle") {
  for (long n = 1; n <= 12; ++n) {
    for (long d = 1; d <= 9; ++d) CHECK(calc_R(n, d) == oracle_R(n, d));
  }
  CHECK(calc_R(4, 4) == 2916);
  CHECK_THROWS_AS(calc_R(0, 2), ArgumentError);
}

TEST_CASE("setting names round trip") {
  CHECK(all_settings().size() == 12);
  for (Setting s : all_settings()) CHECK(parse_setting(setting_name(s)) == s);
  CHECK_THROWS_AS(parse_setting("LOJA"), ArgumentError);
  CHECK(required_fields(Setting::PMI_4_6) == std::vector<std::string>{"n", "m", "d"});
}

TEST_CASE("queries reject missing and extraneous fields") {
  CHECK_THROWS_AS(exponent_for(make(Setting::PMI_4_6, {{'n', 1}, {'m', 2}})), ArgumentError);
  CHECK_THROWS_AS(exponent_for(make(Setting::PMI_4_6, {{'n', 1}, {'m', 2}, {'d', 1}, {'L', 1}})), ArgumentError);
  CHECK_THROWS_AS(exponent_for(make(Setting::CYCLIC_6_3, {{'n', 0}, {'m', 1}, {'d', 1}, {'L', 1}})), ArgumentError);
  CHECK_THROWS_AS(exponent_for(make(Setting::LOJA_EQ_3_6, {{'n', 1}, {'m', 1}, {'s', -1}, {'d', 1}})),
                  ArgumentError);
}

TEST_CASE("exponent kinds") {
  const auto flow = exponent_for(make(Setting::FLOW_6_5, {{'n', 1}, {'m', 1}, {'r', 0}, {'s', 1}, {'d', 1}}));
  CHECK(flow.kind == ExponentKind::Theta);
  CHECK(flow.exponent == Rational(23327, 23328));
  const auto cyc = exponent_for(make(Setting::CYCLIC_6_3, {{'n', 1}, {'m', 1}, {'d', 1}, {'L', 1}}));
  CHECK(cyc.kind == ExponentKind::Rho);
  CHECK_FALSE(cyc.degenerate);
  CHECK(cyc.exponent == Rational(1, 78730));
}

TEST_CASE("EB_4_2 switches formula with L") {
  const auto one = exponent_for(make(Setting::EB_4_2, {{'n', 1}, {'m', 1}, {'r', 0}, {'s', 0}, {'d', 2}, {'L', 1}}));
  CHECK(one.R_arg_n == 4);
  CHECK(one.R_arg_d == 4);
  const auto two = exponent_for(make(Setting::EB_4_2, {{'n', 1}, {'m', 1}, {'r', 0}, {'s', 0}, {'d', 2}, {'L', 2}}));
  CHECK(two.R_arg_n == 8);
  CHECK(two.R_arg_d == 5);
}

TEST_CASE("example_4_5 family bounds") {
  const auto b = example45_bounds(1, 2);
  CHECK(b.lower == Rational(1, 4));
  CHECK(b.upper == Rational(1, 2));
  CHECK(b.corollary == Rational(BigInt(1), oracle_R(6, 5)));
  const auto b2 = example45_bounds(2, 4);
  CHECK(b2.lower == Rational(1, 113));
  CHECK(b2.upper == Rational(1, 32));
  CHECK_THROWS_AS(example45_bounds(1, 3), ArgumentError);
}

TEST_CASE("report JSON round trip and tamper detection") {
  const auto rep = exponent_for(make(Setting::SOCP_5_3, {{'n', 1}, {'m', 1}, {'d', 1}, {'L', 1}}));
  nlohmann::json j = to_json(rep);
  CHECK(j["exponent"] == "1/30233088");
  const auto back = exponent_report_from_json(j);
  CHECK(back.exponent == rep.exponent);
  CHECK(back.query == rep.query);
  j["R_value"] = "30233087";
  CHECK_THROWS_AS(exponent_report_from_json(j), ArgumentError);
  j = to_json(rep);
  j["dims"]["q"] = 1;
  CHECK_THROWS_AS(exponent_report_from_json(j), ArgumentError);
  j = to_json(rep);
  j["R_value"] = "0x10";
  CHECK_THROWS_AS(exponent_report_from_json(j), ArgumentError);
}
