#include "polyeb/exponents.hpp"

#include <algorithm>
#include <array>

#include "polyeb/errors.hpp"

namespace polyeb {
namespace {

struct SettingInfo {
  Setting setting;
  const char* name;
  const char* fields;  // subset of "nmrsdL"
};

constexpr std::array<SettingInfo, 12> kSettings{{
    {Setting::LOJA_3_5, "LOJA_3_5", "nmrsd"},
    {Setting::LOJA_EQ_3_6, "LOJA_EQ_3_6", "nmsd"},
    {Setting::EB_4_2, "EB_4_2", "nmrsdL"},
    {Setting::EB_EQ_4_3, "EB_EQ_4_3", "nmrsdL"},
    {Setting::EB_CONST_4_4, "EB_CONST_4_4", "nmrsdL"},
    {Setting::PMI_4_6, "PMI_4_6", "nmd"},
    {Setting::GSIP_5_1, "GSIP_5_1", "nmrsdL"},
    {Setting::GSIP_SHARP_5_2R, "GSIP_SHARP_5_2R", "nmrsdL"},
    {Setting::PMI_STAB_5_2, "PMI_STAB_5_2", "nmd"},
    {Setting::SOCP_5_3, "SOCP_5_3", "nmdL"},
    {Setting::CYCLIC_6_3, "CYCLIC_6_3", "nmdL"},
    {Setting::FLOW_6_5, "FLOW_6_5", "nmrsd"},
}};

const SettingInfo& info(Setting s) {
  for (const auto& i : kSettings) {
    if (i.setting == s) return i;
  }
  throw ArgumentError("unsupported exponent setting");
}

const std::optional<long>& field(const ExponentQuery& q, char c) {
  switch (c) {
    case 'n': return q.n;
    case 'm': return q.m;
    case 'r': return q.r;
    case 's': return q.s;
    case 'd': return q.d;
    default: return q.L;
  }
}

std::string field_name(char c) { return std::string(1, c); }

}  // namespace

const std::vector<Setting>& all_settings() {
  static const std::vector<Setting> all = [] {
    std::vector<Setting> v;
    for (const auto& i : kSettings) v.push_back(i.setting);
    return v;
  }();
  return all;
}

std::string setting_name(Setting s) { return info(s).name; }

Setting parse_setting(std::string_view name) {
  for (const auto& i : kSettings) {
    if (name == i.name) return i.setting;
  }
  throw ArgumentError("unsupported exponent setting '" + std::string(name) + "'");
}

std::vector<std::string> required_fields(Setting s) {
  std::vector<std::string> out;
  for (const char* p = info(s).fields; *p; ++p) out.push_back(field_name(*p));
  return out;
}

std::string kind_name(ExponentKind k) {
  switch (k) {
    case ExponentKind::Tau: return "tau";
    case ExponentKind::Rho: return "rho";
    case ExponentKind::Theta: return "theta";
  }
  return "tau";
}

void ExponentQuery::validate() const {
  const std::string used = info(setting).fields;
  for (char c : std::string("nmrsdL")) {
    const auto& v = field(*this, c);
    const bool needed = used.find(c) != std::string::npos;
    if (needed && !v) {
      throw ArgumentError(setting_name(setting) + " requires field '" + field_name(c) + "'");
    }
    if (!needed && v) {
      throw ArgumentError(setting_name(setting) + " does not use field '" + field_name(c) + "'");
    }
    if (!v) continue;
    const long lo = (c == 'r' || c == 's') ? 0 : 1;
    if (*v < lo) {
      throw ArgumentError("field '" + field_name(c) + "' must be at least " + std::to_string(lo));
    }
  }
}

BigInt calc_R(long n, long d) {
  if (n < 1 || d < 1) throw ArgumentError("R(n,d) requires n >= 1 and d >= 1");
  if (d == 1) return BigInt(1);
  BigInt base(3 * d - 3);
  BigInt p;
  mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n - 1));
  return BigInt(d) * p;
}

ExponentReport exponent_for(const ExponentQuery& q) {
  q.validate();
  const long n = q.n.value_or(0), m = q.m.value_or(0), r = q.r.value_or(0), s = q.s.value_or(0),
             d = q.d.value_or(0), L = q.L.value_or(0);
  const long min_l = std::min(L - 1, 1L);
  ExponentReport rep;
  rep.query = q;
  rep.kind = ExponentKind::Tau;
  switch (q.setting) {
    case Setting::LOJA_3_5:
      rep.R_arg_n = 2 * n + (m + r + s) * (n + 1);
      rep.R_arg_d = d + 2;
      break;
    case Setting::LOJA_EQ_3_6:
      rep.R_arg_n = 2 * n + (m + s) * (n + 1);
      rep.R_arg_d = d + 1;
      break;
    case Setting::EB_4_2:
      if (L == 1) {
        rep.R_arg_n = 2 * n + (m + r + s) * (n + 1);
        rep.R_arg_d = d + 2;
      } else {
        rep.R_arg_n = 2 * n + (m + r + s + 2) * (n + 1);
        rep.R_arg_d = d + L + 1;
      }
      break;
    case Setting::EB_EQ_4_3:
      rep.R_arg_n = 2 * n + (m + r + s + 2 * min_l) * (n + 1);
      rep.R_arg_d = d + L;
      if (r != 0) rep.notes.push_back("formula keeps r although the sharpening concerns equality-only systems");
      break;
    case Setting::EB_CONST_4_4:
      rep.R_arg_n = 2 * n + (m + r + s + 2 * min_l) * (n + 1);
      rep.R_arg_d = d + L + 1;
      break;
    case Setting::PMI_4_6:
      rep.R_arg_n = 2 * n + (m + 1) * (n + 1);
      rep.R_arg_d = d + 3;
      break;
    case Setting::GSIP_5_1:
      rep.R_arg_n = 2 * n + (m + r + s + 2) * (n + 1);
      rep.R_arg_d = d + L + 2;
      break;
    case Setting::GSIP_SHARP_5_2R:
      rep.R_arg_n = 2 * n + (m + r + s + 2) * (n + 1);
      rep.R_arg_d = d + L + 1;
      break;
    case Setting::PMI_STAB_5_2:
      rep.R_arg_n = 2 * n + (m + 3) * (n + 1);
      rep.R_arg_d = d + 4;
      break;
    case Setting::SOCP_5_3:
      rep.R_arg_n = 2 * n + (m * L + L + 2) * (n + 1);
      rep.R_arg_d = d + L + 1;
      break;
    case Setting::CYCLIC_6_3:
      rep.R_arg_n = 2 * n + (m + 3) * (n + 1);
      rep.R_arg_d = d + L;
      rep.kind = ExponentKind::Rho;
      rep.notes.push_back("degree argument d+L taken as stated");
      break;
    case Setting::FLOW_6_5:
      rep.R_arg_n = 2 * n + (m + r + s) * (n + 1);
      rep.R_arg_d = d + 2;
      rep.kind = ExponentKind::Theta;
      break;
  }
  rep.R_value = calc_R(rep.R_arg_n, rep.R_arg_d);
  switch (rep.kind) {
    case ExponentKind::Tau:
      rep.exponent = Rational(BigInt(1), rep.R_value);
      break;
    case ExponentKind::Rho: {
      BigInt denom = 2 * rep.R_value - 2;
      if (denom <= 0) {
        rep.degenerate = true;
        rep.exponent = 0;
        rep.notes.push_back("R < 2: rate is not finite-positive");
      } else {
        rep.exponent = Rational(BigInt(1), denom);
      }
      break;
    }
    case ExponentKind::Theta:
      rep.exponent = Rational(1) - Rational(BigInt(1), rep.R_value);
      break;
  }
  rep.exponent.canonicalize();
  return rep;
}

Example45Bounds example45_bounds(long n, long d) {
  if (n < 1) throw ArgumentError("example45_bounds: n must be at least 1");
  if (d < 2 || d % 2 != 0) throw ArgumentError("example45_bounds: d must be even and at least 2");
  BigInt a;
  mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(4 * d - 1), static_cast<unsigned long>(n));
  BigInt b;
  mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(2 * d), static_cast<unsigned long>(n - 1));
  Example45Bounds out;
  out.lower = Rational(BigInt(2), a + 1);
  out.upper = Rational(BigInt(1), BigInt(d) * b);
  out.corollary = Rational(BigInt(1), calc_R(2 * n * n + 4 * n, d + 3));
  out.lower.canonicalize();
  out.upper.canonicalize();
  out.corollary.canonicalize();
  if (!(out.corollary <= out.lower)) throw SolverError("corollary value exceeds the lower interval endpoint");
  return out;
}

nlohmann::json query_to_json(const ExponentQuery& q) {
  nlohmann::json dims = nlohmann::json::object();
  for (char c : std::string("nmrsdL")) {
    const auto& v = field(q, c);
    if (v) dims[field_name(c)] = *v;
  }
  return {{"setting", setting_name(q.setting)}, {"dims", dims}};
}

ExponentQuery query_from_json(const nlohmann::json& j) {
  try {
    ExponentQuery q;
    q.setting = parse_setting(j.at("setting").get<std::string>());
    const auto& dims = j.at("dims");
    if (!dims.is_object()) throw ArgumentError("dims: expected an object");
    for (const auto& [key, value] : dims.items()) {
      const long v = value.get<long>();
      if (key == "n") q.n = v;
      else if (key == "m") q.m = v;
      else if (key == "r") q.r = v;
      else if (key == "s") q.s = v;
      else if (key == "d") q.d = v;
      else if (key == "L") q.L = v;
      else throw ArgumentError("dims: unknown field '" + key + "'");
    }
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed exponent query: ") + e.what());
  }
}

nlohmann::json to_json(const ExponentReport& r) {
  nlohmann::json j = query_to_json(r.query);
  j["R_arg_n"] = r.R_arg_n;
  j["R_arg_d"] = r.R_arg_d;
  j["R_value"] = to_string(r.R_value);
  j["R_value_sci"] = to_scientific(r.R_value);
  j["kind"] = kind_name(r.kind);
  j["exponent"] = to_string(r.exponent);
  j["exponent_denominator"] = r.exponent.get_den().get_str();
  j["exponent_denominator_sci"] = to_scientific(r.exponent.get_den());
  j["degenerate"] = r.degenerate;
  j["notes"] = r.notes;
  return j;
}

ExponentReport exponent_report_from_json(const nlohmann::json& j) {
  try {
    const ExponentQuery q = query_from_json(j);
    ExponentReport rep;
    rep.query = q;
    rep.R_arg_n = j.at("R_arg_n").get<long>();
    rep.R_arg_d = j.at("R_arg_d").get<long>();
    const std::string rv = j.at("R_value").get<std::string>();
    if (rv.empty() || rv.find_first_not_of("0123456789") != std::string::npos) {
      throw ArgumentError("R_value: expected a decimal integer");
    }
    rep.R_value = BigInt(rv, 10);
    rep.exponent = parse_rational(j.at("exponent").get<std::string>());
    const std::string kind = j.at("kind").get<std::string>();
    rep.kind = kind == "rho" ? ExponentKind::Rho : kind == "theta" ? ExponentKind::Theta : ExponentKind::Tau;
    rep.degenerate = j.value("degenerate", false);
    rep.notes = j.value("notes", std::vector<std::string>{});
    if (calc_R(rep.R_arg_n, rep.R_arg_d) != rep.R_value) {
      throw ArgumentError("R_value does not match R(R_arg_n, R_arg_d)");
    }
    const ExponentReport fresh = exponent_for(q);
    if (fresh.R_arg_n != rep.R_arg_n || fresh.R_arg_d != rep.R_arg_d || fresh.exponent != rep.exponent) {
      throw ArgumentError("stored exponent disagrees with the recomputed one");
    }
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed exponent report: ") + e.what());
  }
}

}  // namespace polyeb
