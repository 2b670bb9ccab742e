#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kstab/errors.hpp"
#include "kstab/parallel.hpp"
#include "kstab/rational.hpp"
#include "kstab/stability.hpp"
#include "kstab/support.hpp"

namespace kstab {

// Exact lower bound for the energy over the whole weight hyperplane, reduced
// by homogeneity to the polytope {Σλ = 0, ‖λ‖_∞ ≤ 1}. The energy is linear
// on every cell of the subdivision of that polytope by the walls below, so
// its minimum is attained at a cell vertex, and every cell vertex solves
// Σλ = 0 together with n constraints chosen from (walls ∪ box facets).
struct Certificate {
  Rational minimum;
  WeightVector witness;               // lexicographically smallest minimizer
  std::vector<std::string> walls_used;  // constraints active at the witness
  std::size_t vertex_count = 0;         // distinct feasible vertices examined
  BigInt subset_count;                  // n-subsets enumerated
};

namespace detail {

struct Constraint {
  std::vector<Rational> normal;  // normal · λ = rhs
  Rational rhs;
  std::string label;
};

// Integer vector scaled to primitive form with positive leading entry; empty
// when the vector is zero (a vacuous wall).
inline std::optional<std::vector<long long>> primitive_direction(std::vector<long long> v) {
  long long g = 0;
  for (long long e : v) {
    long long a = e < 0 ? -e : e;
    while (a != 0) {
      const long long r = g % a;
      g = a;
      a = r;
    }
  }
  if (g == 0) return std::nullopt;
  long long lead = 0;
  for (long long& e : v) {
    e /= g;
    if (lead == 0) lead = e;
  }
  if (lead < 0) {
    for (long long& e : v) e = -e;
  }
  return v;
}

// Wall directions along which the energy's linear form can change: weight
// ties w_j = w_l, and per-variable concurrency of the envelope lines of
// monomial triples. Deduplicated up to sign and scale; first label wins.
inline std::map<std::vector<long long>, std::string> wall_directions(const Support& support) {
  std::map<std::vector<long long>, std::string> walls;
  const std::size_t p = support.monomials.size();
  const std::size_t size = support.n + 1;
  const auto exponent = [&](std::size_t j, std::size_t k) {
    return static_cast<long long>(support.monomials[j].exponents[k]);
  };

  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t l = j + 1; l < p; ++l) {
      std::vector<long long> v(size);
      for (std::size_t k = 0; k < size; ++k) v[k] = exponent(j, k) - exponent(l, k);
      if (auto dir = primitive_direction(std::move(v))) {
        walls.emplace(std::move(*dir), "weight tie w" + std::to_string(j) + "=w" +
                                           std::to_string(l));
      }
    }
  }
  for (std::size_t k = 0; k < size; ++k) {
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t l = j + 1; l < p; ++l) {
        for (std::size_t m = l + 1; m < p; ++m) {
          // (w_j - w_l)(a_kj - a_km) = (w_j - w_m)(a_kj - a_kl) as a linear
          // functional of λ.
          const long long c1 = exponent(j, k) - exponent(m, k);
          const long long c2 = exponent(j, k) - exponent(l, k);
          std::vector<long long> v(size);
          for (std::size_t t = 0; t < size; ++t) {
            v[t] = (exponent(j, t) - exponent(l, t)) * c1 -
                   (exponent(j, t) - exponent(m, t)) * c2;
          }
          if (auto dir = primitive_direction(std::move(v))) {
            walls.emplace(std::move(*dir), "concurrency var " + std::to_string(k) +
                                               " monomials (" + std::to_string(j) + "," +
                                               std::to_string(l) + "," + std::to_string(m) +
                                               ")");
          }
        }
      }
    }
  }
  return walls;
}

inline std::vector<Constraint> certify_pool(const Support& support) {
  const std::size_t size = support.n + 1;
  std::vector<Constraint> pool;
  for (auto& [direction, label] : wall_directions(support)) {
    Constraint c;
    c.normal.assign(direction.begin(), direction.end());
    c.rhs = 0;
    c.label = label;
    pool.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < size; ++i) {
    for (const int sign : {+1, -1}) {
      Constraint c;
      c.normal.assign(size, Rational(0));
      c.normal[i] = 1;
      c.rhs = sign;
      c.label = "box lambda_" + std::to_string(i) + " = " + (sign > 0 ? "1" : "-1");
      pool.push_back(std::move(c));
    }
  }
  return pool;
}

inline BigInt binomial(std::size_t m, std::size_t k) {
  if (k > m) return 0;
  BigInt result = 1;
  for (std::size_t i = 0; i < k; ++i) {
    result = result * BigInt(m - i) / BigInt(i + 1);
  }
  return result;
}

// Unique solution of the square augmented system, if any.
inline std::optional<WeightVector> solve_square(std::vector<std::vector<Rational>> rows) {
  const std::size_t dim = rows.size();
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t pivot = col;
    while (pivot < dim && rows[pivot][col] == 0) ++pivot;
    if (pivot == dim) return std::nullopt;
    std::swap(rows[col], rows[pivot]);
    for (std::size_t row = 0; row < dim; ++row) {
      if (row == col || rows[row][col] == 0) continue;
      const Rational factor = rows[row][col] / rows[col][col];
      for (std::size_t c = col; c <= dim; ++c) rows[row][c] -= factor * rows[col][c];
    }
  }
  WeightVector out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = rows[i][dim] / rows[i][i];
  return out;
}

}  // namespace detail

// Number of constraint subsets certify_min would have to solve; cheap to
// compute up front so callers can report it before committing.
inline BigInt certify_subset_count(const Support& support) {
  return detail::binomial(detail::certify_pool(support).size(), support.n);
}

inline Certificate certify_min(const Support& support, std::uint64_t box_limit = 1000000,
                               unsigned jobs = 1) {
  const std::size_t size = support.n + 1;
  const std::vector<detail::Constraint> pool = detail::certify_pool(support);
  const BigInt count = detail::binomial(pool.size(), support.n);
  if (count > box_limit) {
    throw BudgetExceededError("certification would enumerate " + count.str() +
                                  " constraint subsets (limit " + std::to_string(box_limit) +
                                  ")",
                              count.str());
  }

  // All n-subsets of pool indices, flat with stride n.
  const std::size_t n = support.n;
  std::vector<std::uint32_t> combos;
  {
    std::vector<std::size_t> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = i;
    while (true) {
      for (std::size_t i = 0; i < n; ++i) combos.push_back(static_cast<std::uint32_t>(c[i]));
      std::size_t i = n;
      while (i > 0 && c[i - 1] == pool.size() - n + (i - 1)) --i;
      if (i == 0) break;
      ++c[i - 1];
      for (std::size_t t = i; t < n; ++t) c[t] = c[t - 1] + 1;
    }
  }
  const std::size_t total = combos.size() / n;

  std::vector<std::optional<WeightVector>> solved(total);
  detail::parallel_for(total, jobs, [&](std::size_t s) {
    std::vector<std::vector<Rational>> rows;
    rows.reserve(size);
    rows.emplace_back(size + 1, Rational(1));
    rows.back()[size] = 0;  // trace hyperplane
    for (std::size_t i = 0; i < n; ++i) {
      const detail::Constraint& c = pool[combos[s * n + i]];
      std::vector<Rational> row = c.normal;
      row.push_back(c.rhs);
      rows.push_back(std::move(row));
    }
    std::optional<WeightVector> vertex = detail::solve_square(std::move(rows));
    if (vertex) {
      for (const Rational& entry : *vertex) {
        if (entry > 1 || entry < -1) {
          vertex.reset();
          break;
        }
      }
    }
    solved[s] = std::move(vertex);
  });

  std::set<WeightVector> distinct;
  for (const std::optional<WeightVector>& vertex : solved) {
    if (vertex) distinct.insert(*vertex);
  }
  if (distinct.empty()) throw Error("internal: certification found no feasible vertex");
  const std::vector<WeightVector> vertices(distinct.begin(), distinct.end());

  std::vector<Rational> values(vertices.size());
  detail::parallel_for(vertices.size(), jobs, [&](std::size_t i) {
    values[i] = energy(support, vertices[i]);
  });

  // Vertices are in ascending lexicographic order, so the first strict
  // minimum is the lexicographically smallest witness.
  std::size_t best = 0;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }

  Certificate cert;
  cert.minimum = values[best];
  cert.witness = vertices[best];
  cert.vertex_count = vertices.size();
  cert.subset_count = count;
  for (const detail::Constraint& c : pool) {
    Rational lhs = 0;
    for (std::size_t k = 0; k < size; ++k) lhs += c.normal[k] * cert.witness[k];
    if (lhs == c.rhs) cert.walls_used.push_back(c.label);
  }
  return cert;
}

}  // namespace kstab
