#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace skelpair {

using Rational = mpq_class;

/// "p/q" in lowest terms with q > 0; integers print as "p/1".
std::string to_string(const Rational& q);

/// Accepts "p/q", "p" and plain decimals ("-0.125", "1e-3").
/// Throws Error(SchemaError) on anything else or a zero denominator.
Rational parse_rational(std::string_view text);

/// Nearest rational with denominator 2^bits (ties away from zero).
/// Non-finite input throws Error(EvalError).
Rational dyadic_round(double value, int bits = 53);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact power with integer exponent (negative exponents invert; 0^-k throws).
Rational pow(const Rational& base, long exponent);

}  // namespace skelpair
