#include "widthlab/rational.hpp"

#include "widthlab/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

namespace widthlab {

namespace {

// Decimal literal: [sign] digits [. digits] [(e|E) [sign] digits]
Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      any_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw ParseError("not a number: '" + std::string(text) + "'");
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    auto first = text.data() + pos;
    if (pos < text.size() && text[pos] == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), exponent);
    if (ec != std::errc() || ptr == first) {
      throw ParseError("bad exponent in '" + std::string(text) + "'");
    }
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  if (pos != text.size()) throw ParseError("trailing characters in '" + std::string(text) + "'");
  if (exponent > 4000 || exponent < -4000) throw ParseError("exponent out of range in '" + std::string(text) + "'");

  mpz_class mantissa(digits, 10);
  long shift = exponent - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational result = shift >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

}  // namespace

Rational rational_from_string(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty number");
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  Rational num = parse_decimal(text.substr(0, slash));
  Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite value cannot be made rational");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw DomainError("number formatting failed");
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

double log2_of(const Rational& value) {
  if (sgn(value) == 0) return -std::numeric_limits<double>::infinity();
  if (sgn(value) < 0) throw DomainError("log2 of a negative rational");
  long num_exp = 0;
  long den_exp = 0;
  double num = mpz_get_d_2exp(&num_exp, value.get_num_mpz_t());
  double den = mpz_get_d_2exp(&den_exp, value.get_den_mpz_t());
  return std::log2(num) - std::log2(den) + static_cast<double>(num_exp - den_exp);
}

Rational pow2_neg(unsigned k) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
  return Rational(mpz_class(1), den);
}

std::string to_string(const Rational& value) { return value.get_str(); }

}  // namespace widthlab
