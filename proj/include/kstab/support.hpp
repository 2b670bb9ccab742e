#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "kstab/errors.hpp"
#include "kstab/rational.hpp"

namespace kstab {

// One term of the defining polynomial. The coefficient is recorded for
// round-trip fidelity, but every computed quantity depends only on the
// exponent vector (given that all coefficients are nonzero).
struct Monomial {
  std::vector<unsigned> exponents;  // length n+1
  Rational coefficient = 1;

  unsigned degree() const {
    unsigned total = 0;
    for (unsigned e : exponents) total += e;
    return total;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Monomial support of a degree-d hypersurface in projective n-space.
// Canonical order: exponent vectors descending lexicographically.
struct Support {
  unsigned n = 0;
  unsigned d = 0;
  std::vector<Monomial> monomials;

  friend bool operator==(const Support&, const Support&) = default;
};

struct ValidationReport {
  bool fano = false;
  // For each variable, the index of some monomial that omits it.
  std::vector<std::size_t> zero_exponent_witness;
  std::vector<std::string> warnings;
};

// Validates and canonicalizes raw monomial data: pads exponent vectors to
// n+1 entries, merges duplicate exponent vectors by summing coefficients,
// sorts into canonical order, and enforces the support invariants.
inline Support make_support(unsigned n, std::vector<Monomial> monomials) {
  if (n < 1) throw ParseError("ambient dimension must be at least 1", 0);
  if (monomials.empty()) throw ParseError("support must contain at least one monomial", 0);

  for (Monomial& m : monomials) {
    if (m.exponents.size() > n + 1) {
      throw DimensionError("monomial has more than n+1 exponents");
    }
    m.exponents.resize(n + 1, 0);
  }

  // Merge duplicates; a merged coefficient of zero means the term vanishes.
  std::vector<Monomial> merged;
  for (Monomial& m : monomials) {
    bool found = false;
    for (Monomial& kept : merged) {
      if (kept.exponents == m.exponents) {
        kept.coefficient += m.coefficient;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(std::move(m));
  }
  for (const Monomial& m : merged) {
    if (m.coefficient == 0) {
      throw VanishingCoefficientError("monomial coefficient vanishes after merging duplicates");
    }
  }

  std::sort(merged.begin(), merged.end(), [](const Monomial& a, const Monomial& b) {
    return a.exponents > b.exponents;
  });

  Support support;
  support.n = n;
  support.d = merged.front().degree();
  support.monomials = std::move(merged);
  if (support.d == 0) {
    throw ParseError("a constant polynomial does not define a hypersurface", 0);
  }
  for (const Monomial& m : support.monomials) {
    if (m.degree() != support.d) {
      throw NotHomogeneousError("monomials of degree " + std::to_string(m.degree()) +
                                " and " + std::to_string(support.d) + " mixed in one polynomial");
    }
  }

  // Each variable must be missing from some monomial; otherwise the variable
  // divides the polynomial and the hypersurface has a hyperplane component.
  for (unsigned k = 0; k <= n; ++k) {
    bool omitted = false;
    for (const Monomial& m : support.monomials) {
      if (m.exponents[k] == 0) {
        omitted = true;
        break;
      }
    }
    if (!omitted) {
      throw DivisibleByVariableError(
          "every monomial contains variable Z" + std::to_string(k), k);
    }
  }
  return support;
}

// Re-checks all Support invariants (throwing as make_support does) and
// reports Fano status plus per-variable witnesses.
inline ValidationReport validate_support(const Support& support) {
  std::vector<Monomial> copy = support.monomials;
  const Support rebuilt = make_support(support.n, std::move(copy));
  if (rebuilt.d != support.d) {
    throw NotHomogeneousError("declared degree " + std::to_string(support.d) +
                              " does not match monomials of degree " +
                              std::to_string(rebuilt.d));
  }
  if (rebuilt.monomials != support.monomials) {
    throw Error("support is not in canonical form");
  }

  ValidationReport report;
  report.fano = support.d <= support.n;
  if (!report.fano) {
    report.warnings.push_back("d > n: the hypersurface is not Fano; values are computed as defined");
  }
  for (unsigned k = 0; k <= support.n; ++k) {
    for (std::size_t j = 0; j < support.monomials.size(); ++j) {
      if (support.monomials[j].exponents[k] == 0) {
        report.zero_exponent_witness.push_back(j);
        break;
      }
    }
  }
  return report;
}

}  // namespace kstab
