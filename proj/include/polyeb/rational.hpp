#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace polyeb {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "3", "-3/2", "0.125", "1e-3", "-2.5E2" exactly.
/// Throws ArgumentError on anything else, or on a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q = 1).
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// Scientific notation with `digits` significant digits, e.g. "2.916e3".
std::string to_scientific(const BigInt& z, int digits = 6);

/// Exact conversion of a finite double (binary fraction).
Rational exact_rational(double v);

/// Best rational approximation with denominator <= max_den (continued fractions).
Rational best_rational_approximation(double v, std::uint64_t max_den);

}  // namespace polyeb
