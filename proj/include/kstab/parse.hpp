#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kstab/errors.hpp"
#include "kstab/rational.hpp"
#include "kstab/support.hpp"

namespace kstab {

namespace detail {

class PolynomialParser {
 public:
  explicit PolynomialParser(std::string_view text) : text_(text) {}

  Support run() {
    skip_space();
    std::optional<unsigned> declared_n = parse_header();

    std::vector<Monomial> monomials;
    unsigned max_index = 0;
    bool first = true;
    while (true) {
      skip_space();
      Rational sign = 1;
      if (!first || peek('+') || peek('-')) {
        if (consume('+')) {
          sign = 1;
        } else if (consume('-')) {
          sign = -1;
        } else if (first) {
          // no leading sign; fall through to the term
        } else {
          throw ParseError("expected '+' or '-' between terms", pos_);
        }
      }
      monomials.push_back(parse_term(sign, max_index));
      first = false;
      skip_space();
      if (pos_ == text_.size()) break;
      if (!peek('+') && !peek('-')) {
        throw ParseError("unexpected character in polynomial", pos_);
      }
    }

    unsigned n = declared_n ? *declared_n : max_index;
    if (declared_n && max_index > *declared_n) {
      throw ParseError("variable index Z" + std::to_string(max_index) +
                           " exceeds declared n=" + std::to_string(*declared_n),
                       pos_);
    }
    return make_support(n, std::move(monomials));
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  bool consume(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  bool digit_ahead() const {
    return pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9';
  }

  unsigned long long parse_integer(const char* what) {
    if (!digit_ahead()) throw ParseError(std::string("expected ") + what, pos_);
    unsigned long long value = 0;
    while (digit_ahead()) {
      value = value * 10 + static_cast<unsigned long long>(text_[pos_] - '0');
      if (value > 1'000'000'000ULL) throw ParseError(std::string(what) + " is out of range", pos_);
      ++pos_;
    }
    return value;
  }

  // Optional leading directive "n=<int>;".
  std::optional<unsigned> parse_header() {
    const std::size_t mark = pos_;
    if (!consume('n')) return std::nullopt;
    skip_space();
    if (!consume('=')) {
      pos_ = mark;
      return std::nullopt;
    }
    skip_space();
    const unsigned n = static_cast<unsigned>(parse_integer("dimension"));
    skip_space();
    if (!consume(';')) throw ParseError("expected ';' after the n= directive", pos_);
    return n;
  }

  // Term: optional rational coefficient, then factors Z<k>[^<e>] joined by
  // optional '*'.
  Monomial parse_term(const Rational& sign, unsigned& max_index) {
    skip_space();
    Monomial m;
    m.coefficient = sign;
    bool saw_coefficient = false;
    if (digit_ahead()) {
      const std::size_t at = pos_;
      BigInt numerator(parse_integer("coefficient"));
      BigInt denominator = 1;
      if (consume('/')) {
        denominator = BigInt(parse_integer("denominator"));
        if (denominator == 0) throw ParseError("coefficient denominator must be nonzero", at);
      }
      if (numerator == 0) {
        throw VanishingCoefficientError("coefficient at position " + std::to_string(at) +
                                        " is zero");
      }
      m.coefficient *= Rational(numerator, denominator);
      saw_coefficient = true;
      skip_space();
      consume('*');
    }

    bool saw_factor = false;
    while (true) {
      skip_space();
      if (!peek('Z')) break;
      ++pos_;
      const unsigned index = static_cast<unsigned>(parse_integer("variable index"));
      unsigned exponent = 1;
      if (consume('^')) {
        exponent = static_cast<unsigned>(parse_integer("exponent"));
      }
      if (index > max_index) max_index = index;
      if (m.exponents.size() <= index) m.exponents.resize(index + 1, 0);
      m.exponents[index] += exponent;
      saw_factor = true;
      skip_space();
      consume('*');
    }
    if (!saw_factor && !saw_coefficient) {
      throw ParseError("expected a coefficient or a variable factor", pos_);
    }
    return m;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Text grammar: terms separated by '+'/'-'; a term is an optional rational
// coefficient and factors 'Z<k>' with optional '^<e>', joined by optional
// '*'; whitespace is insignificant. n defaults to the largest variable index
// and can be raised with a leading "n=<int>;" directive (for supports that
// omit trailing variables entirely).
inline Support parse_polynomial(std::string_view text) {
  return detail::PolynomialParser(text).run();
}

// JSON schema: {"n": int, "d": int, "monomials": [[int,...],...]} with an
// optional "coefficients" array of integers or "p/q" strings (default 1).
inline Support parse_support_json(const std::string& bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what(), static_cast<std::size_t>(err.byte));
  }
  if (!doc.is_object()) throw ParseError("top-level JSON value must be an object", 0);
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw ParseError("missing or non-integer \"n\"", 0);
  }
  if (!doc.contains("d") || !doc["d"].is_number_integer()) {
    throw ParseError("missing or non-integer \"d\"", 0);
  }
  if (!doc.contains("monomials") || !doc["monomials"].is_array() || doc["monomials"].empty()) {
    throw ParseError("missing or empty \"monomials\" array", 0);
  }
  const long long n = doc["n"].get<long long>();
  const long long d = doc["d"].get<long long>();
  if (n < 1) throw ParseError("\"n\" must be at least 1", 0);
  if (d < 1) throw ParseError("\"d\" must be at least 1", 0);

  std::vector<Monomial> monomials;
  for (const auto& row : doc["monomials"]) {
    if (!row.is_array()) throw ParseError("each monomial must be an array of exponents", 0);
    Monomial m;
    for (const auto& entry : row) {
      if (!entry.is_number_integer() || entry.get<long long>() < 0) {
        throw ParseError("exponents must be nonnegative integers", 0);
      }
      m.exponents.push_back(static_cast<unsigned>(entry.get<long long>()));
    }
    monomials.push_back(std::move(m));
  }
  if (doc.contains("coefficients")) {
    const auto& coeffs = doc["coefficients"];
    if (!coeffs.is_array() || coeffs.size() != monomials.size()) {
      throw ParseError("\"coefficients\" must parallel \"monomials\"", 0);
    }
    for (std::size_t j = 0; j < monomials.size(); ++j) {
      if (coeffs[j].is_number_integer()) {
        monomials[j].coefficient = Rational(coeffs[j].get<long long>());
      } else if (coeffs[j].is_string()) {
        monomials[j].coefficient = parse_rational(coeffs[j].get<std::string>());
      } else {
        throw ParseError("coefficients must be integers or \"p/q\" strings", 0);
      }
      if (monomials[j].coefficient == 0) {
        throw VanishingCoefficientError("coefficient " + std::to_string(j) + " is zero");
      }
    }
  }

  Support support = make_support(static_cast<unsigned>(n), std::move(monomials));
  if (support.d != static_cast<unsigned>(d)) {
    throw NotHomogeneousError("declared degree " + std::to_string(d) +
                              " does not match monomials of degree " +
                              std::to_string(support.d));
  }
  return support;
}

namespace detail {

inline void append_monomial_body(std::string& out, const Monomial& m) {
  bool any = false;
  for (std::size_t k = 0; k < m.exponents.size(); ++k) {
    if (m.exponents[k] == 0) continue;
    if (any) out += "*";
    out += "Z" + std::to_string(k);
    if (m.exponents[k] > 1) out += "^" + std::to_string(m.exponents[k]);
    any = true;
  }
  if (!any) out += "1";
}

}  // namespace detail

// Inverse of parse_polynomial on canonical supports.
inline std::string serialize_polynomial(const Support& support) {
  std::string out;
  unsigned max_index = 0;
  for (const Monomial& m : support.monomials) {
    for (std::size_t k = 0; k < m.exponents.size(); ++k) {
      if (m.exponents[k] > 0) max_index = std::max(max_index, static_cast<unsigned>(k));
    }
  }
  if (max_index < support.n) out += "n=" + std::to_string(support.n) + "; ";

  for (std::size_t j = 0; j < support.monomials.size(); ++j) {
    const Monomial& m = support.monomials[j];
    Rational magnitude = m.coefficient;
    if (j == 0) {
      if (magnitude < 0) {
        out += "-";
        magnitude = -magnitude;
      }
    } else {
      if (magnitude < 0) {
        out += " - ";
        magnitude = -magnitude;
      } else {
        out += " + ";
      }
    }
    if (magnitude != 1) out += to_string(magnitude) + "*";
    detail::append_monomial_body(out, m);
  }
  return out;
}

// Inverse of parse_support_json; coefficients are emitted as exact strings.
inline nlohmann::ordered_json serialize_support_json(const Support& support) {
  nlohmann::ordered_json doc;
  doc["n"] = support.n;
  doc["d"] = support.d;
  doc["monomials"] = nlohmann::ordered_json::array();
  doc["coefficients"] = nlohmann::ordered_json::array();
  for (const Monomial& m : support.monomials) {
    doc["monomials"].push_back(m.exponents);
    doc["coefficients"].push_back(to_string(m.coefficient));
  }
  return doc;
}

}  // namespace kstab
