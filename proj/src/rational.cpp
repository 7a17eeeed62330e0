#include "polyeb/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "polyeb/errors.hpp"

namespace polyeb {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt pow10(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

Rational parse_decimal(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto pos = s.find_first_of("eE"); pos != std::string_view::npos) {
    std::string_view exp_part = s.substr(pos + 1);
    s = s.substr(0, pos);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part[0] == '+' || exp_part[0] == '-')) {
      exp_negative = exp_part[0] == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) {
      throw ArgumentError("malformed exponent in number '" + std::string(original) + "'");
    }
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }
  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw ArgumentError("malformed number '" + std::string(original) + "'");
  }
  std::string digits = std::string(int_part) + std::string(frac_part);
  if (digits.empty()) digits = "0";
  Rational value{BigInt(digits, 10), BigInt(1)};
  exponent -= static_cast<long>(frac_part.size());
  if (exponent >= 0) {
    value *= Rational(pow10(static_cast<unsigned long>(exponent)));
  } else {
    value /= Rational(pow10(static_cast<unsigned long>(-exponent)));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ArgumentError("empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits[0] == '-' || num_digits[0] == '+')) {
      num_digits.remove_prefix(1);
    }
    if (!all_digits(num_digits) || !all_digits(den)) {
      throw ArgumentError("malformed rational '" + std::string(text) + "'");
    }
    BigInt n{std::string(num_digits), 10};
    BigInt d{std::string(den), 10};
    if (d == 0) throw ArgumentError("zero denominator in '" + std::string(text) + "'");
    if (num[0] == '-') n = -n;
    Rational q(n, d);
    q.canonicalize();
    return q;
  }
  return parse_decimal(s, text);
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

std::string to_scientific(const BigInt& z, int digits) {
  std::string s = BigInt(abs(z)).get_str();
  std::string sign = z < 0 ? "-" : "";
  const auto exponent = static_cast<long>(s.size()) - 1;
  if (digits < 1) digits = 1;
  // round to `digits` significant digits
  std::string mant = s.substr(0, std::min<std::size_t>(s.size(), static_cast<std::size_t>(digits)));
  long exp_adj = exponent;
  if (s.size() > static_cast<std::size_t>(digits) && s[static_cast<std::size_t>(digits)] >= '5') {
    BigInt m(mant, 10);
    m += 1;
    std::string bumped = m.get_str();
    if (bumped.size() > mant.size()) {
      ++exp_adj;
      bumped.pop_back();
    }
    mant = bumped;
  }
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  std::string out = sign + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(exp_adj);
  return out;
}

Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw ArgumentError("non-finite value has no rational form");
  Rational q(v);  // GMP converts doubles exactly
  q.canonicalize();
  return q;
}

Rational best_rational_approximation(double v, std::uint64_t max_den) {
  if (!std::isfinite(v)) throw ArgumentError("non-finite value has no rational form");
  if (max_den == 0) throw ArgumentError("max_den must be positive");
  // Continued fraction of the exact binary value, truncated at the
  // denominator cap; the final semiconvergent is compared with the last
  // convergent.
  Rational x = exact_rational(v);
  BigInt h_prev2 = 0, h_prev1 = 1, k_prev2 = 1, k_prev1 = 0;
  BigInt cap(std::to_string(max_den));
  Rational rem = x;
  for (int iter = 0; iter < 200; ++iter) {
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
    BigInt h = a * h_prev1 + h_prev2;
    BigInt k = a * k_prev1 + k_prev2;
    if (k > cap) {
      BigInt t = (cap - k_prev2) / k_prev1;
      Rational semi(t * h_prev1 + h_prev2, t * k_prev1 + k_prev2);
      semi.canonicalize();
      Rational conv(h_prev1, k_prev1);
      conv.canonicalize();
      return abs(semi - x) < abs(conv - x) ? semi : conv;
    }
    h_prev2 = h_prev1;
    h_prev1 = h;
    k_prev2 = k_prev1;
    k_prev1 = k;
    Rational frac = rem - Rational(a);
    if (frac == 0) break;
    rem = 1 / frac;
  }
  Rational r(h_prev1, k_prev1);
  r.canonicalize();
  return r;
}

}  // namespace polyeb
