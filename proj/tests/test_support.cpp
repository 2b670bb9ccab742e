#include "kstab/support.hpp"

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "kstab/errors.hpp"
#include "kstab/parse.hpp"

namespace kstab {
namespace {

TEST(ParsePolynomial, FermatCubic) {
  const Support s = parse_polynomial("Z0^3 + Z1^3 + Z2^3 + Z3^3");
  EXPECT_EQ(s.n, 3u);
  EXPECT_EQ(s.d, 3u);
  ASSERT_EQ(s.monomials.size(), 4u);
  EXPECT_EQ(s.monomials[0].exponents, (std::vector<unsigned>{3, 0, 0, 0}));
  EXPECT_EQ(s.monomials[3].exponents, (std::vector<unsigned>{0, 0, 0, 3}));
  for (const Monomial& m : s.monomials) EXPECT_EQ(m.coefficient, Rational(1));
}

TEST(ParsePolynomial, QuadricWithSigns) {
  const Support s = parse_polynomial("Z0*Z3 - Z1*Z2");
  EXPECT_EQ(s.n, 3u);
  EXPECT_EQ(s.d, 2u);
  ASSERT_EQ(s.monomials.size(), 2u);
  EXPECT_EQ(s.monomials[0].exponents, (std::vector<unsigned>{1, 0, 0, 1}));
  EXPECT_EQ(s.monomials[0].coefficient, Rational(1));
  EXPECT_EQ(s.monomials[1].exponents, (std::vector<unsigned>{0, 1, 1, 0}));
  EXPECT_EQ(s.monomials[1].coefficient, Rational(-1));
}

TEST(ParsePolynomial, MixedDegreesRejected) {
  EXPECT_THROW(parse_polynomial("Z0^2 + Z1^3"), NotHomogeneousError);
}

TEST(ParsePolynomial, RationalCoefficientsAndJuxtaposition) {
  const Support s = parse_polynomial("3/4 Z0^2*Z1 - 2Z1^3 + Z0^3");
  ASSERT_EQ(s.monomials.size(), 3u);
  EXPECT_EQ(s.monomials[0].coefficient, Rational(1));
  EXPECT_EQ(s.monomials[1].coefficient, Rational(3, 4));
  EXPECT_EQ(s.monomials[2].coefficient, Rational(-2));
}

TEST(ParsePolynomial, HeaderRaisesDimension) {
  const Support s = parse_polynomial("n=3; Z0^3 + Z1^3 + Z2^3 + Z0*Z1*Z2");
  EXPECT_EQ(s.n, 3u);
  ASSERT_EQ(s.monomials.size(), 4u);
  EXPECT_EQ(s.monomials[0].exponents.size(), 4u);
}

TEST(ParsePolynomial, HeaderTooSmallRejected) {
  EXPECT_THROW(parse_polynomial("n=1; Z0^2 + Z2^2"), ParseError);
}

TEST(ParsePolynomial, SyntaxErrorsCarryPositions) {
  try {
    parse_polynomial("Z0^2 + @");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
}

TEST(ParsePolynomial, RepeatedVariableAccumulates) {
  const Support s = parse_polynomial("Z0*Z0*Z0 + Z1^3");
  EXPECT_EQ(s.monomials[0].exponents, (std::vector<unsigned>{3, 0}));
}

TEST(ParsePolynomial, DuplicateTermsMerge) {
  const Support s = parse_polynomial("Z0^2 + Z0^2 + Z1^2");
  ASSERT_EQ(s.monomials.size(), 2u);
  EXPECT_EQ(s.monomials[0].coefficient, Rational(2));
}

TEST(ParsePolynomial, CancellingTermsRejected) {
  EXPECT_THROW(parse_polynomial("Z0^2 - Z0^2 + Z1^2"), VanishingCoefficientError);
}

TEST(ParsePolynomial, ZeroCoefficientRejected) {
  EXPECT_THROW(parse_polynomial("0*Z0^2 + Z1^2"), VanishingCoefficientError);
}

TEST(ParsePolynomial, DivisibleVariableRejected) {
  try {
    parse_polynomial("Z0^2*Z3 + Z1^2*Z3 + Z2^2*Z3");
    FAIL() << "expected DivisibleByVariableError";
  } catch (const DivisibleByVariableError& e) {
    EXPECT_EQ(e.variable(), 3u);
  }
}

TEST(ParseJson, FermatCubic) {
  const Support s = parse_support_json(
      R"({"n":3,"d":3,"monomials":[[3,0,0,0],[0,3,0,0],[0,0,3,0],[0,0,0,3]]})");
  EXPECT_EQ(s, parse_polynomial("Z0^3 + Z1^3 + Z2^3 + Z3^3"));
}

TEST(ParseJson, Conic) {
  const Support s = parse_support_json(R"({"n":2,"d":2,"monomials":[[1,1,0],[0,0,2]]})");
  EXPECT_EQ(s.n, 2u);
  EXPECT_EQ(s.d, 2u);
  ASSERT_EQ(s.monomials.size(), 2u);
  EXPECT_EQ(s.monomials[0].exponents, (std::vector<unsigned>{1, 1, 0}));
}

TEST(ParseJson, DivisibleVariableRejected) {
  EXPECT_THROW(parse_support_json(
                   R"({"n":3,"d":3,"monomials":[[2,0,0,1],[0,2,0,1],[0,0,2,1],[0,0,0,3]]})"),
               DivisibleByVariableError);
}

TEST(ParseJson, CoefficientStringsAccepted) {
  const Support s = parse_support_json(
      R"({"n":2,"d":2,"monomials":[[1,1,0],[0,0,2]],"coefficients":["3/4",-2]})");
  EXPECT_EQ(s.monomials[0].coefficient, Rational(3, 4));
  EXPECT_EQ(s.monomials[1].coefficient, Rational(-2));
}

TEST(ParseJson, ZeroCoefficientRejected) {
  EXPECT_THROW(parse_support_json(
                   R"({"n":2,"d":2,"monomials":[[1,1,0],[0,0,2]],"coefficients":[0,1]})"),
               VanishingCoefficientError);
}

TEST(ParseJson, SchemaViolationsRejected) {
  EXPECT_THROW(parse_support_json("[1,2,3]"), ParseError);
  EXPECT_THROW(parse_support_json(R"({"d":2,"monomials":[[1,1,0]]})"), ParseError);
  EXPECT_THROW(parse_support_json(R"({"n":2,"d":2,"monomials":[]})"), ParseError);
  EXPECT_THROW(parse_support_json(R"({"n":2,"d":2,"monomials":[[1,-1,2]]})"), ParseError);
  EXPECT_THROW(parse_support_json("{not json"), ParseError);
}

TEST(ParseJson, DegreeMismatchRejected) {
  EXPECT_THROW(parse_support_json(R"({"n":2,"d":3,"monomials":[[1,1,0],[0,0,2]]})"),
               NotHomogeneousError);
}

TEST(Validate, FermatCubicIsFano) {
  const Support s = parse_polynomial("Z0^3 + Z1^3 + Z2^3 + Z3^3");
  const ValidationReport report = validate_support(s);
  EXPECT_TRUE(report.fano);
  EXPECT_TRUE(report.warnings.empty());
  EXPECT_EQ(report.zero_exponent_witness.size(), 4u);
}

TEST(Validate, PlaneCubicCycleWarnsNonFano) {
  const Support s = parse_polynomial("Z0^2*Z1 + Z1^2*Z2 + Z2^2*Z0");
  const ValidationReport report = validate_support(s);
  EXPECT_FALSE(report.fano);
  ASSERT_EQ(report.warnings.size(), 1u);
}

TEST(Validate, WitnessesPointAtOmittingMonomials) {
  const Support s = parse_polynomial("Z0*Z3 - Z1*Z2");
  const ValidationReport report = validate_support(s);
  ASSERT_EQ(report.zero_exponent_witness.size(), 4u);
  for (unsigned k = 0; k <= 3; ++k) {
    EXPECT_EQ(s.monomials[report.zero_exponent_witness[k]].exponents[k], 0u);
  }
}

TEST(RoundTrip, TextSerializationIsStable) {
  const std::vector<std::string> sources = {
      "Z0^3 + Z1^3 + Z2^3 + Z3^3",
      "Z0*Z3 - Z1*Z2",
      "3/4*Z0^2*Z1 - 2*Z1^2*Z2 + Z2^2*Z0",
      "n=3; Z0^3 + Z1^3 + Z2^3 + Z0*Z1*Z2",
  };
  for (const std::string& source : sources) {
    const Support s = parse_polynomial(source);
    EXPECT_EQ(parse_polynomial(serialize_polynomial(s)), s) << source;
  }
}

TEST(RoundTrip, JsonSerializationIsStable) {
  const Support s = parse_polynomial("3/4*Z0^2*Z1 - 2*Z1^2*Z2 + Z2^2*Z0");
  EXPECT_EQ(parse_support_json(serialize_support_json(s).dump()), s);
}

TEST(RoundTrip, TextAndJsonPathsAgree) {
  const Support text = parse_polynomial("Z0*Z1 + Z2^2");
  const Support json = parse_support_json(R"({"n":2,"d":2,"monomials":[[1,1,0],[0,0,2]]})");
  EXPECT_EQ(text, json);
}

// Random valid supports survive a full serialize/parse cycle; random invalid
// ones are rejected for the advertised reason.
TEST(RoundTrip, RandomSupports) {
  std::mt19937_64 rng(92);
  int built = 0;
  while (built < 50) {
    const unsigned n = 1 + rng() % 3;
    const unsigned d = 1 + rng() % 4;
    const std::size_t count = 2 + rng() % 5;
    std::vector<Monomial> monomials;
    for (std::size_t i = 0; i < count; ++i) {
      Monomial m;
      m.exponents.assign(n + 1, 0);
      for (unsigned total = 0; total < d; ++total) ++m.exponents[rng() % (n + 1)];
      const long long num = 1 + static_cast<long long>(rng() % 9);
      m.coefficient = Rational(rng() % 2 == 0 ? num : -num, 1 + rng() % 4);
      monomials.push_back(std::move(m));
    }
    Support support;
    try {
      support = make_support(n, monomials);
    } catch (const Error&) {
      continue;  // duplicate cancellation or divisibility; not this test's target
    }
    ++built;
    EXPECT_EQ(parse_polynomial(serialize_polynomial(support)), support);
    EXPECT_EQ(parse_support_json(serialize_support_json(support).dump()), support);
    const ValidationReport report = validate_support(support);
    EXPECT_EQ(report.zero_exponent_witness.size(), support.n + 1);
  }
}

}  // namespace
}  // namespace kstab
