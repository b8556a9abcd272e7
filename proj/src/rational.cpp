#include "skelpair/rational.hpp"

#include <cctype>
#include <cmath>

#include "skelpair/errors.hpp"

namespace skelpair {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s) {
  std::string str(s);
  if (!str.empty() && str[0] == '+') str.erase(0, 1);
  return mpz_class(str, 10);
}

// Exact decimal: [sign] digits [. digits] [e|E [sign] digits]
bool parse_decimal(std::string_view s, Rational& out) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) negative = s[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool any = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    digits += s[i++];
    any = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
      ++frac_digits;
      any = true;
    }
  }
  if (!any) return false;
  long exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::string_view rest = s.substr(i);
    if (!is_integer_literal(rest) || rest.size() > 6) return false;
    exponent = std::stol(std::string(rest));
    i = s.size();
  }
  if (i != s.size()) return false;
  mpz_class num(digits, 10);
  long scale = exponent - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  out = scale >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  out.canonicalize();
  if (negative) out = -out;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto fail = [&]() {
    return Error(ErrorKind::SchemaError, "not a rational: '" + std::string(text) + "'",
                 {{"value", std::string(text)}});
  };
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    auto p = text.substr(0, slash);
    auto q = text.substr(slash + 1);
    if (!is_integer_literal(p) || !is_integer_literal(q)) throw fail();
    mpz_class den = parse_integer(q);
    if (den == 0) throw fail();
    Rational r(parse_integer(p), den);
    r.canonicalize();
    return r;
  }
  Rational r;
  if (!parse_decimal(text, r)) throw fail();
  return r;
}

Rational dyadic_round(double value, int bits) {
  if (!std::isfinite(value))
    throw Error(ErrorKind::EvalError, "non-finite value cannot be rationalized");
  Rational exact(value);  // doubles are dyadic, so this is exact
  mpz_class scale = mpz_class(1) << bits;
  Rational scaled = exact * scale;
  // round half away from zero
  mpz_class num = scaled.get_num();
  mpz_class den = scaled.get_den();
  mpz_class q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (2 * abs(r) >= den) q += (num >= 0) ? 1 : -1;
  Rational out(q, scale);
  out.canonicalize();
  return out;
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw Error(ErrorKind::EvalError, "zero raised to a negative power");
    return pow(Rational(1) / base, -exponent);
  }
  Rational result(1), b(base);
  unsigned long e = static_cast<unsigned long>(exponent);
  while (e) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1u;
  }
  result.canonicalize();
  return result;
}

}  // namespace skelpair
