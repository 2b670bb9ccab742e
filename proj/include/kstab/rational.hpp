#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "kstab/errors.hpp"

namespace kstab {

// All result-bearing arithmetic in this library is exact. cpp_rational keeps
// values in lowest terms with a positive denominator, which is exactly the
// invariant the rest of the code relies on.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Canonical form: "p" when the denominator is 1, otherwise "p/q".
inline std::string to_string(const Rational& value) { return value.str(); }

inline double to_double(const Rational& value) {
  return value.template convert_to<double>();
}

namespace detail {

inline bool parse_digits(std::string_view text, std::size_t& pos, BigInt& out) {
  const std::size_t start = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  if (pos == start) return false;
  out = BigInt(std::string(text.substr(start, pos - start)));
  return true;
}

}  // namespace detail

// Accepts an optionally signed integer "p" or fraction "p/q" with q > 0.
inline Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt numerator;
  if (!detail::parse_digits(text, pos, numerator)) {
    throw ParseError("expected a rational number", pos);
  }
  BigInt denominator = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    if (!detail::parse_digits(text, pos, denominator)) {
      throw ParseError("expected a denominator after '/'", pos);
    }
    if (denominator == 0) throw ParseError("denominator must be nonzero", pos);
  }
  if (pos != text.size()) {
    throw ParseError("trailing characters after rational number", pos);
  }
  if (negative) numerator = -numerator;
  return Rational(numerator, denominator);
}

}  // namespace kstab
