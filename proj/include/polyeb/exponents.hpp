#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyeb/rational.hpp"

namespace polyeb {

enum class Setting {
  LOJA_3_5,
  LOJA_EQ_3_6,
  EB_4_2,
  EB_EQ_4_3,
  EB_CONST_4_4,
  PMI_4_6,
  GSIP_5_1,
  GSIP_SHARP_5_2R,
  PMI_STAB_5_2,
  SOCP_5_3,
  CYCLIC_6_3,
  FLOW_6_5,
};

const std::vector<Setting>& all_settings();
std::string setting_name(Setting s);
Setting parse_setting(std::string_view name);

/// Dimension fields consumed by the setting's formula, in the order n m r s d L.
std::vector<std::string> required_fields(Setting s);

struct ExponentQuery {
  Setting setting = Setting::LOJA_3_5;
  std::optional<long> n, m, r, s, d, L;

  /// Checks ranges, presence of every consumed field and absence of the rest.
  void validate() const;
  friend bool operator==(const ExponentQuery&, const ExponentQuery&) = default;
};

enum class ExponentKind { Tau, Rho, Theta };
std::string kind_name(ExponentKind k);

struct ExponentReport {
  ExponentQuery query;
  long R_arg_n = 0;
  long R_arg_d = 0;
  BigInt R_value;
  Rational exponent;
  ExponentKind kind = ExponentKind::Tau;
  bool degenerate = false;
  std::vector<std::string> notes;
};

/// 1 when d = 1, else d·(3d−3)^{n−1}, exact.
BigInt calc_R(long n, long d);

ExponentReport exponent_for(const ExponentQuery& q);

struct Example45Bounds {
  Rational lower;
  Rational upper;
  Rational corollary;
};
/// Interval [2/((4d−1)^n+1), 1/(d(2d)^{n−1})] and the value 1/R(2n²+4n, d+3).
Example45Bounds example45_bounds(long n, long d);

nlohmann::json to_json(const ExponentReport& r);
nlohmann::json query_to_json(const ExponentQuery& q);
ExponentQuery query_from_json(const nlohmann::json& j);
/// Parses a report and recomputes R; throws ArgumentError when the stored
/// value disagrees.
ExponentReport exponent_report_from_json(const nlohmann::json& j);

}  // namespace polyeb
