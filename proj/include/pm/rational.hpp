#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace pm {

/// Arbitrary-precision integer (GMP-backed, no expression templates so the
/// type plays nicely as an Eigen scalar).
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// Exact rational scalar. Values constructed through the helpers below are
/// always canonical: lowest terms, positive denominator. All arithmetic on
/// canonical values stays canonical, so equality and ordering are exact.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

/// Builds num/den in canonical form. Throws std::invalid_argument on a zero
/// denominator.
inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r;
  mpq_set_num(r.backend().data(), num.backend().data());
  mpq_set_den(r.backend().data(), den.backend().data());
  mpq_canonicalize(r.backend().data());
  return r;
}

inline Rational make_rational(long num, long den) {
  return make_rational(Integer(num), Integer(den));
}

namespace detail {

inline Integer parse_integer_digits(std::string_view text, std::string_view original) {
  bool neg = false;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    neg = text[pos] == '-';
    ++pos;
  }
  if (pos >= text.size())
    throw std::invalid_argument("not a rational: '" + std::string(original) + "'");
  Integer value = 0;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c < '0' || c > '9')
      throw std::invalid_argument("not a rational: '" + std::string(original) + "'");
    value = value * 10 + (c - '0');
  }
  return neg ? Integer(-value) : value;
}

}  // namespace detail

/// Parses "p/q", a bare integer, or a plain decimal like "0.9" (which becomes
/// 9/10 exactly). Rejects malformed text and zero denominators.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("not a rational: ''");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = detail::parse_integer_digits(text.substr(0, slash), text);
    std::string_view den_part = text.substr(slash + 1);
    if (den_part.empty() || den_part.find('/') != std::string_view::npos)
      throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    Integer den = detail::parse_integer_digits(den_part, text);
    if (den == 0)
      throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return make_rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view head = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    Integer int_part = 0;
    if (!head.empty() && head != "-" && head != "+")
      int_part = detail::parse_integer_digits(head, text);
    if (int_part < 0) int_part = -int_part;
    Integer den = 1;
    Integer num = int_part;
    for (char c : frac) {
      if (c < '0' || c > '9')
        throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
      num = num * 10 + (c - '0');
      den *= 10;
    }
    if (head.empty() || head == "-" || head == "+") {
      if (frac.empty())
        throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    }
    return make_rational(neg ? Integer(-num) : num, den);
  }
  return make_rational(detail::parse_integer_digits(text, text), Integer(1));
}

/// Canonical text form: "p/q" in lowest terms, integers without "/1".
inline std::string to_string(const Rational& r) { return r.str(); }

/// Fixed-point decimal with `digits` places, rounding half away from zero.
inline std::string to_decimal(const Rational& r, int digits) {
  if (digits < 0) digits = 0;
  Integer num = numerator(r);
  Integer den = denominator(r);
  bool neg = num < 0;
  if (neg) num = -num;
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(digits));
  // round(|r| * 10^digits) with ties away from zero
  Integer scaled = (num * scale * 2 + den) / (den * 2);
  std::string body = scaled.str();
  std::string out;
  if (digits == 0) {
    out = body;
  } else {
    if (static_cast<int>(body.size()) <= digits)
      body.insert(body.begin(), digits + 1 - body.size(), '0');
    out = body.substr(0, body.size() - digits) + "." + body.substr(body.size() - digits);
  }
  if (neg && scaled != 0) out.insert(out.begin(), '-');
  return out;
}

}  // namespace pm
