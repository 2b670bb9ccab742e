#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "kstab/errors.hpp"
#include "kstab/parallel.hpp"
#include "kstab/rational.hpp"
#include "kstab/stability.hpp"
#include "kstab/support.hpp"

namespace kstab {

struct SearchConfig {
  unsigned height = 2;           // sup-norm bound for integer enumeration
  unsigned samples = 0;          // random directions (each sign evaluated)
  std::uint64_t seed = 0;
  unsigned refine_rounds = 2;
  unsigned denominator_cap = 16; // smallest refinement step is 1/denominator_cap
  unsigned jobs = 1;
};

struct SearchTraceEntry {
  WeightVector lambda;
  Rational score;
};

struct SearchResult {
  WeightVector best_lambda;
  Rational best_score;  // energy(best_lambda) / sup-norm(best_lambda)
  std::size_t evaluations = 0;
  bool violated = false;
  std::vector<SearchTraceEntry> trace;  // improving iterates, in order
};

inline Rational sup_norm(const WeightVector& lambda) {
  Rational norm = 0;
  for (const Rational& entry : lambda) {
    if (entry >= 0 ? entry > norm : -entry > norm) norm = entry >= 0 ? entry : -entry;
  }
  return norm;
}

// Every primitive integer vector λ ≠ 0 with Σλ = 0 and ‖λ‖_∞ ≤ height, in
// lexicographic order. Both signs appear (the energy is not odd).
inline std::vector<WeightVector> enumerate_integer_directions(unsigned n, unsigned height) {
  std::vector<WeightVector> out;
  if (height == 0) return out;
  const std::size_t size = n + 1;
  std::vector<long long> entries(size, -static_cast<long long>(height));
  const long long bound = static_cast<long long>(height);
  while (true) {
    long long trace = 0;
    for (long long e : entries) trace += e;
    if (trace == 0) {
      BigInt gcd = 0;
      for (long long e : entries) gcd = boost::multiprecision::gcd(gcd, BigInt(e < 0 ? -e : e));
      if (gcd == 1) {
        WeightVector lambda;
        lambda.reserve(size);
        for (long long e : entries) lambda.push_back(Rational(e));
        out.push_back(std::move(lambda));
      }
    }
    std::size_t pos = size;
    while (pos > 0 && entries[pos - 1] == bound) {
      entries[pos - 1] = -bound;
      --pos;
    }
    if (pos == 0) break;
    ++entries[pos - 1];
  }
  return out;
}

// Deterministic pseudo-random rational directions with Σλ = 0 and sup-norm
// exactly 1. Reproducible from the seed alone; generation is serial, so the
// output never depends on how evaluation is parallelized.
inline std::vector<WeightVector> sample_directions(unsigned n, unsigned count,
                                                   std::uint64_t seed) {
  std::vector<WeightVector> out;
  out.reserve(count);
  std::mt19937_64 engine(seed);
  constexpr long long kRange = 1000;  // raw entries in [-1000, 1000]
  const std::size_t size = n + 1;
  while (out.size() < count) {
    std::vector<long long> raw(size);
    for (long long& entry : raw) {
      // Explicit modulo reduction: uniform_int_distribution is
      // implementation-defined and would break cross-platform determinism.
      entry = static_cast<long long>(engine() % (2 * kRange + 1)) - kRange;
    }
    long long trace = 0;
    for (long long entry : raw) trace += entry;
    WeightVector lambda;
    lambda.reserve(size);
    Rational norm = 0;
    for (long long entry : raw) {
      Rational centered = Rational(entry) - Rational(trace, static_cast<long long>(size));
      if ((centered >= 0 ? centered : -centered) > norm) {
        norm = centered >= 0 ? centered : -centered;
      }
      lambda.push_back(std::move(centered));
    }
    if (norm == 0) continue;  // degenerate draw; try again
    for (Rational& entry : lambda) entry /= norm;
    out.push_back(std::move(lambda));
  }
  return out;
}

namespace detail {

// Scale-invariant objective E(λ)/‖λ‖_∞ (zero for λ = 0).
inline Rational direction_score(const Support& support, const WeightVector& lambda) {
  const Rational norm = sup_norm(lambda);
  if (norm == 0) return 0;
  return energy(support, lambda) / norm;
}

inline WeightVector sup_normalized(const WeightVector& lambda) {
  const Rational norm = sup_norm(lambda);
  WeightVector out = lambda;
  if (norm == 0 || norm == 1) return out;
  for (Rational& entry : out) entry /= norm;
  return out;
}

}  // namespace detail

// Exact pattern search along coordinate-pair moves λ + s(eᵢ − eⱼ), with the
// step s halving from 1 down to 1/denominator_cap and the iterate sup-norm
// renormalized after every accepted move. Strict-improvement acceptance plus
// a per-step sweep cap guarantee termination. Returns `start` itself when no
// move improves it. `evaluations`, when given, accumulates the number of
// energy evaluations spent; `trace` likewise records accepted iterates.
inline WeightVector local_refine(const Support& support, const WeightVector& start,
                                 const SearchConfig& cfg,
                                 std::size_t* evaluations = nullptr,
                                 std::vector<SearchTraceEntry>* trace = nullptr) {
  if (start.size() != support.n + 1) {
    throw DimensionError("refinement start has wrong dimension");
  }
  if (sup_norm(start) == 0) return start;

  const auto score_of = [&](const WeightVector& lambda) {
    if (evaluations) ++*evaluations;
    return detail::direction_score(support, lambda);
  };

  WeightVector current = detail::sup_normalized(start);
  Rational best = score_of(current);
  bool any_accepted = false;
  constexpr unsigned kSweepCap = 100;  // safety bound per step size

  for (unsigned round = 0; round < cfg.refine_rounds; ++round) {
    bool improved_this_round = false;
    Rational step = 1;
    while (true) {
      bool improved_at_step = false;
      for (unsigned sweep = 0; sweep < kSweepCap; ++sweep) {
        bool improved_this_sweep = false;
        for (std::size_t i = 0; i < current.size(); ++i) {
          for (std::size_t j = 0; j < current.size(); ++j) {
            if (i == j) continue;
            WeightVector candidate = current;
            candidate[i] += step;
            candidate[j] -= step;
            if (sup_norm(candidate) == 0) continue;
            candidate = detail::sup_normalized(candidate);
            const Rational candidate_score = score_of(candidate);
            if (candidate_score < best) {
              current = std::move(candidate);
              best = candidate_score;
              improved_this_sweep = true;
              improved_at_step = true;
              if (trace) trace->push_back({current, best});
            }
          }
        }
        if (!improved_this_sweep) break;
      }
      if (improved_at_step) improved_this_round = true;
      if (step * 2 * cfg.denominator_cap <= 2) break;  // step already at 1/cap
      step /= 2;
    }
    if (improved_this_round) any_accepted = true;
    if (!improved_this_round) break;
  }
  return any_accepted ? current : start;
}

// Evaluates every enumerated integer direction up to cfg.height and every
// sampled direction (both signs), then refines the best candidate. The
// reduction is a serial scan in candidate order, so the result is identical
// for any job count. Ties in score resolve to the lexicographically smallest
// weight vector.
inline SearchResult search_min(const Support& support, const SearchConfig& cfg) {
  std::vector<WeightVector> candidates = enumerate_integer_directions(support.n, cfg.height);
  for (WeightVector& sample : sample_directions(support.n, cfg.samples, cfg.seed)) {
    WeightVector negated;
    negated.reserve(sample.size());
    for (const Rational& entry : sample) negated.push_back(-entry);
    candidates.push_back(std::move(sample));
    candidates.push_back(std::move(negated));
  }

  SearchResult result;
  result.best_lambda = WeightVector(support.n + 1, Rational(0));
  result.best_score = 0;
  if (candidates.empty()) {
    result.violated = false;
    return result;
  }

  std::vector<Rational> scores(candidates.size());
  detail::parallel_for(candidates.size(), cfg.jobs, [&](std::size_t i) {
    scores[i] = detail::direction_score(support, candidates[i]);
  });
  result.evaluations = candidates.size();

  std::size_t best_index = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (scores[i] < scores[best_index] ||
        (scores[i] == scores[best_index] && candidates[i] < candidates[best_index])) {
      best_index = i;
    }
  }
  result.best_lambda = candidates[best_index];
  result.best_score = scores[best_index];
  result.trace.push_back({result.best_lambda, result.best_score});

  if (cfg.refine_rounds > 0) {
    const WeightVector refined = local_refine(support, result.best_lambda, cfg,
                                              &result.evaluations, &result.trace);
    const Rational refined_score = detail::direction_score(support, refined);
    ++result.evaluations;
    if (refined_score < result.best_score ||
        (refined_score == result.best_score && refined < result.best_lambda)) {
      result.best_lambda = refined;
      result.best_score = refined_score;
    }
  }

  result.violated = result.best_score < 0;
  return result;
}

}  // namespace kstab
