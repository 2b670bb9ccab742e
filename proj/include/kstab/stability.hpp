#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "kstab/envelope.hpp"
#include "kstab/errors.hpp"
#include "kstab/rational.hpp"
#include "kstab/support.hpp"

namespace kstab {

// Direction (λ₀,…,λ_n) of the diagonal one-parameter group; operations
// require Σλᵢ = 0 exactly.
using WeightVector = std::vector<Rational>;

// Per-monomial action data derived from a (support, λ) pair.
struct WeightData {
  std::vector<Rational> w;        // wⱼ = Σₖ λₖ·αₖʲ
  Rational lambda_max;            // maxⱼ wⱼ
  Rational delta;                 // −lambda_max
  std::vector<Rational> delta_i;  // λ_max − wⱼ, all ≥ 0 with minimum 0
  std::vector<std::size_t> order; // monomial indices, delta_i ascending
};

struct StabilityGenericity {
  bool delta_distinct = true;
  std::vector<std::pair<std::size_t, std::size_t>> delta_ties;  // monomial pairs
  // (variable, monomial triple) with three concurrent envelope lines.
  std::vector<std::pair<std::size_t, std::array<std::size_t, 3>>> concurrent_triples;

  bool generic() const { return delta_distinct && concurrent_triples.empty(); }
};

struct InvarianceData {
  Rational kappa;
  Rational futaki;
};

struct StabilityReport {
  WeightData weight_data;
  std::vector<Rational> penalties;  // one per variable
  Rational energy;
  Rational limit;
  Rational energy_reverse;
  StabilityGenericity genericity;
  std::optional<InvarianceData> invariant;
  bool mainc_inequality_holds = false;
};

inline WeightData compute_weights(const Support& support, const WeightVector& lambda) {
  if (lambda.size() != support.n + 1) {
    throw DimensionError("weight vector has " + std::to_string(lambda.size()) +
                         " entries; the support needs " + std::to_string(support.n + 1));
  }
  Rational trace = 0;
  for (const Rational& entry : lambda) trace += entry;
  if (trace != 0) {
    throw WeightSumError("weight entries must sum to zero, got " + to_string(trace));
  }

  WeightData data;
  data.w.reserve(support.monomials.size());
  for (const Monomial& m : support.monomials) {
    Rational w = 0;
    for (std::size_t k = 0; k < lambda.size(); ++k) w += lambda[k] * m.exponents[k];
    data.w.push_back(std::move(w));
  }
  data.lambda_max = *std::max_element(data.w.begin(), data.w.end());
  data.delta = -data.lambda_max;
  data.delta_i.reserve(data.w.size());
  for (const Rational& w : data.w) data.delta_i.push_back(data.lambda_max - w);
  data.order.resize(data.w.size());
  std::iota(data.order.begin(), data.order.end(), std::size_t{0});
  std::stable_sort(data.order.begin(), data.order.end(),
                   [&](std::size_t a, std::size_t b) { return data.delta_i[a] < data.delta_i[b]; });
  return data;
}

// The line family whose lower envelope is the axis restriction φₖ:
// one line (−wⱼ, αₖʲ) per monomial, deduplicated.
inline std::vector<Line> phi_lines(const Support& support, const WeightVector& lambda,
                                   std::size_t k) {
  if (k > support.n) {
    throw DimensionError("variable index " + std::to_string(k) + " exceeds n=" +
                         std::to_string(support.n));
  }
  const WeightData data = compute_weights(support, lambda);
  std::vector<Line> all;
  all.reserve(support.monomials.size());
  for (std::size_t j = 0; j < support.monomials.size(); ++j) {
    all.push_back({-data.w[j], Rational(support.monomials[j].exponents[k])});
  }
  std::vector<Line> lines;
  for (std::size_t id : detail::dedup_lines(all)) lines.push_back(all[id]);
  return lines;
}

// ∫₀^∞ φₖ′(φₖ′−1) dx, evaluated by the segment route and cross-checked
// against the independent pair route.
inline Rational variable_penalty(const Support& support, const WeightVector& lambda,
                                 std::size_t k) {
  const std::vector<Line> lines = phi_lines(support, lambda, k);
  const Rational by_segments = penalty_segment_sum(build_envelope(lines));
  const Rational by_pairs = penalty_pair_sum(breakpoint_sequence(lines), lines);
  if (by_segments != by_pairs) {
    throw Error("internal consistency failure: penalty routes disagree (" +
                to_string(by_segments) + " vs " + to_string(by_pairs) + ")");
  }
  return by_segments;
}

// E(λ) = −λ_max·(d−1)(n+1)/n + Σₖ penaltyₖ. Defined for every rational λ
// with Σλ = 0; no genericity is required because envelopes handle ties.
inline Rational energy(const Support& support, const WeightVector& lambda) {
  const WeightData data = compute_weights(support, lambda);
  Rational total = -data.lambda_max * Rational(support.d - 1) * Rational(support.n + 1) /
                   Rational(support.n);
  for (std::size_t k = 0; k <= support.n; ++k) {
    total += variable_penalty(support, lambda, k);
  }
  return total;
}

// L(λ) = (2/d)·E(λ), the limiting slope itself.
inline Rational k_energy_limit(const Support& support, const WeightVector& lambda) {
  return Rational(2) / Rational(support.d) * energy(support, lambda);
}

// Checks the two degeneracy conditions: distinct δⱼ across monomials, and no
// three lines of any per-variable family through a common point.
inline StabilityGenericity check_genericity(const Support& support, const WeightVector& lambda) {
  const WeightData data = compute_weights(support, lambda);
  StabilityGenericity result;
  for (std::size_t j = 0; j < data.delta_i.size(); ++j) {
    for (std::size_t l = j + 1; l < data.delta_i.size(); ++l) {
      if (data.delta_i[j] == data.delta_i[l]) {
        result.delta_distinct = false;
        result.delta_ties.emplace_back(j, l);
      }
    }
  }
  for (std::size_t k = 0; k <= support.n; ++k) {
    std::vector<Line> family;
    family.reserve(support.monomials.size());
    for (std::size_t j = 0; j < support.monomials.size(); ++j) {
      family.push_back({data.delta_i[j], Rational(support.monomials[j].exponents[k])});
    }
    const GenericityReport lines_report = check_line_genericity(family);
    for (const auto& triple : lines_report.concurrent_triples) {
      result.concurrent_triples.emplace_back(k, triple);
    }
  }
  return result;
}

// κ such that every monomial has weight κ (the polynomial is an eigenvector
// of the group action), if one exists.
inline std::optional<Rational> detect_invariance(const Support& support,
                                                 const WeightVector& lambda) {
  const WeightData data = compute_weights(support, lambda);
  for (const Rational& w : data.w) {
    if (w != data.w.front()) return std::nullopt;
  }
  return data.w.front();
}

// −(n+1)(d−1)κ/n in the invariant case; checked against E(λ), which must
// coincide because every penalty vanishes for a valid invariant support.
inline Rational futaki_invariant(const Support& support, const WeightVector& lambda) {
  const std::optional<Rational> kappa = detect_invariance(support, lambda);
  if (!kappa) {
    throw NotInvariantError("the polynomial is not an eigenvector of this group action");
  }
  const Rational value = -Rational(support.n + 1) * Rational(support.d - 1) * *kappa /
                         Rational(support.n);
  if (energy(support, lambda) != value) {
    throw Error("internal consistency failure: invariant-case energy mismatch");
  }
  return value;
}

inline StabilityReport report(const Support& support, const WeightVector& lambda) {
  StabilityReport out;
  out.weight_data = compute_weights(support, lambda);
  for (std::size_t k = 0; k <= support.n; ++k) {
    out.penalties.push_back(variable_penalty(support, lambda, k));
  }
  out.energy = -out.weight_data.lambda_max * Rational(support.d - 1) *
               Rational(support.n + 1) / Rational(support.n);
  for (const Rational& penalty : out.penalties) out.energy += penalty;
  out.limit = Rational(2) / Rational(support.d) * out.energy;

  WeightVector reversed;
  reversed.reserve(lambda.size());
  for (const Rational& entry : lambda) reversed.push_back(-entry);
  out.energy_reverse = energy(support, reversed);

  out.genericity = check_genericity(support, lambda);
  if (const std::optional<Rational> kappa = detect_invariance(support, lambda)) {
    out.invariant = InvarianceData{*kappa, futaki_invariant(support, lambda)};
  }
  out.mainc_inequality_holds = out.energy >= 0;
  return out;
}

}  // namespace kstab
