#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "kstab/errors.hpp"
#include "kstab/rational.hpp"

namespace kstab {

// A line y = intercept + slope * x, considered on [0, inf).
struct Line {
  Rational intercept;
  Rational slope;

  Rational at(const Rational& x) const { return intercept + slope * x; }

  friend bool operator==(const Line&, const Line&) = default;
};

// One maximal linear piece of a lower envelope. The final segment extends to
// +infinity and has no end.
struct EnvelopeSegment {
  Rational start;
  std::optional<Rational> end;
  Rational slope;
  Rational value_at_start;
};

// Lower envelope of a finite line family on [0, inf): a concave piecewise
// linear function with strictly decreasing segment slopes.
struct Envelope {
  std::vector<EnvelopeSegment> segments;
  Rational final_slope;

  Rational value_at(const Rational& x) const {
    if (x < 0) throw Error("envelope evaluated at negative x");
    std::size_t k = segments.size() - 1;
    while (k > 0 && segments[k].start > x) --k;
    return segments[k].value_at_start + segments[k].slope * (x - segments[k].start);
  }
};

// Entry k states that the line with the given index is the lowest one from
// this breakpoint until the next entry's breakpoint.
struct BreakpointEntry {
  std::size_t line_index;
  Rational breakpoint;

  friend bool operator==(const BreakpointEntry&, const BreakpointEntry&) = default;
};

struct BreakpointSequence {
  std::vector<BreakpointEntry> entries;
};

struct GenericityReport {
  bool intercepts_distinct = true;
  std::vector<std::array<std::size_t, 3>> concurrent_triples;

  bool generic() const { return intercepts_distinct && concurrent_triples.empty(); }
};

namespace detail {

// Indices of the first occurrence of each distinct (intercept, slope) pair.
inline std::vector<std::size_t> dedup_lines(const std::vector<Line>& lines) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    bool seen = false;
    for (std::size_t j : keep) {
      if (lines[j] == lines[i]) {
        seen = true;
        break;
      }
    }
    if (!seen) keep.push_back(i);
  }
  return keep;
}

// The line lowest at x; ties go to the smallest slope (the one that stays
// lowest just to the right), then to the smallest index.
inline std::size_t lowest_line_at(const std::vector<Line>& lines,
                                  const std::vector<std::size_t>& ids,
                                  const Rational& x) {
  std::size_t best = ids.front();
  Rational best_value = lines[best].at(x);
  for (std::size_t id : ids) {
    const Rational value = lines[id].at(x);
    if (value < best_value ||
        (value == best_value && lines[id].slope < lines[best].slope)) {
      best = id;
      best_value = value;
    }
  }
  return best;
}

}  // namespace detail

// Walks the envelope from x = 0 rightward. Each step crosses from the active
// line to the earliest strictly-later intersection with a line of smaller
// slope, so slopes strictly decrease and the walk stops after at most one
// step per distinct line. When several lines pass through one crossing point
// the smallest-slope minimizer wins, which collapses would-be zero-length
// segments.
inline BreakpointSequence breakpoint_sequence(const std::vector<Line>& lines) {
  if (lines.empty()) throw EmptyFamilyError("breakpoint sequence of an empty line family");
  const std::vector<std::size_t> ids = detail::dedup_lines(lines);

  BreakpointSequence seq;
  Rational x = 0;
  std::size_t current = detail::lowest_line_at(lines, ids, x);
  seq.entries.push_back({current, x});
  while (true) {
    std::optional<Rational> next;
    for (std::size_t id : ids) {
      if (lines[id].slope >= lines[current].slope) continue;
      const Rational cross = (lines[id].intercept - lines[current].intercept) /
                             (lines[current].slope - lines[id].slope);
      if (cross <= x) continue;
      if (!next || cross < *next) next = cross;
    }
    if (!next) break;
    x = *next;
    current = detail::lowest_line_at(lines, ids, x);
    seq.entries.push_back({current, x});
  }
  return seq;
}

inline Envelope build_envelope(const std::vector<Line>& lines) {
  const BreakpointSequence seq = breakpoint_sequence(lines);
  Envelope env;
  env.segments.reserve(seq.entries.size());
  for (std::size_t k = 0; k < seq.entries.size(); ++k) {
    const BreakpointEntry& entry = seq.entries[k];
    const Line& line = lines[entry.line_index];
    EnvelopeSegment seg;
    seg.start = entry.breakpoint;
    if (k + 1 < seq.entries.size()) seg.end = seq.entries[k + 1].breakpoint;
    seg.slope = line.slope;
    seg.value_at_start = line.at(entry.breakpoint);
    env.segments.push_back(std::move(seg));
  }
  env.final_slope = env.segments.back().slope;
  return env;
}

// Integral of slope*(slope-1) over [0, inf), summed segment by segment. The
// unbounded tail contributes 0 exactly when the final slope is 0 or 1;
// otherwise the integral diverges.
inline Rational penalty_segment_sum(const Envelope& env) {
  const Rational& tail = env.final_slope;
  if (tail * (tail - 1) != 0) {
    throw DivergentPenaltyError("penalty integral diverges: final envelope slope is " +
                                to_string(tail));
  }
  Rational total = 0;
  for (const EnvelopeSegment& seg : env.segments) {
    if (!seg.end) break;
    total += (*seg.end - seg.start) * seg.slope * (seg.slope - 1);
  }
  return total;
}

// The same integral telescoped over consecutive breakpoint-sequence entries:
// each adjacent pair (a, b) contributes
//   (intercept_b - intercept_a) * (slope_a + slope_b - 1).
// No crossing coordinate is ever computed here, which makes this an
// arithmetic route independent of the segment sum.
inline Rational penalty_pair_sum(const BreakpointSequence& seq,
                                 const std::vector<Line>& lines) {
  if (seq.entries.empty()) throw EmptyFamilyError("penalty of an empty breakpoint sequence");
  const Rational& tail = lines[seq.entries.back().line_index].slope;
  if (tail * (tail - 1) != 0) {
    throw DivergentPenaltyError("penalty integral diverges: final envelope slope is " +
                                to_string(tail));
  }
  Rational total = 0;
  for (std::size_t k = 0; k + 1 < seq.entries.size(); ++k) {
    const Line& a = lines[seq.entries[k].line_index];
    const Line& b = lines[seq.entries[k + 1].line_index];
    total += (b.intercept - a.intercept) * (a.slope + b.slope - 1);
  }
  return total;
}

// Floating-point check of the penalty integral by per-cell difference
// quotients of the pointwise minimum. Testing aid only; results elsewhere in
// the library are exact. The grid covers [0, 2 * last breakpoint + 1]; the
// rightmost pairwise crossing is used as an upper bound for the last
// breakpoint so that no envelope structure is consulted.
inline double penalty_quadrature(const std::vector<Line>& lines, double grid_step) {
  if (lines.empty()) throw EmptyFamilyError("quadrature over an empty line family");
  if (!(grid_step > 0)) throw Error("grid step must be positive");

  // As x grows the minimum is eventually attained by the smallest slope.
  Rational tail = lines.front().slope;
  for (const Line& line : lines) {
    if (line.slope < tail) tail = line.slope;
  }
  if (tail * (tail - 1) != 0) {
    throw DivergentPenaltyError("penalty integral diverges: final envelope slope is " +
                                to_string(tail));
  }

  Rational reach = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[i].slope == lines[j].slope) continue;
      const Rational cross = (lines[j].intercept - lines[i].intercept) /
                             (lines[i].slope - lines[j].slope);
      if (cross > reach) reach = cross;
    }
  }
  const double upper = 2 * to_double(reach) + 1;

  std::vector<double> intercepts(lines.size());
  std::vector<double> slopes(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    intercepts[i] = to_double(lines[i].intercept);
    slopes[i] = to_double(lines[i].slope);
  }
  const auto lowest = [&](double x) {
    double best = intercepts[0] + slopes[0] * x;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      best = std::min(best, intercepts[i] + slopes[i] * x);
    }
    return best;
  };

  const auto cells = static_cast<long long>(std::ceil(upper / grid_step));
  double total = 0.0;
  double left_value = lowest(0.0);
  for (long long c = 0; c < cells; ++c) {
    const double right_value = lowest(static_cast<double>(c + 1) * grid_step);
    const double quotient = (right_value - left_value) / grid_step;
    total += grid_step * quotient * (quotient - 1.0);
    left_value = right_value;
  }
  return total;
}

// Exact degeneracy scan: flags repeated intercepts and every triple of lines
// passing through a common point.
inline GenericityReport check_line_genericity(const std::vector<Line>& lines) {
  GenericityReport report;
  for (std::size_t i = 0; i < lines.size() && report.intercepts_distinct; ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[i].intercept == lines[j].intercept) {
        report.intercepts_distinct = false;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      for (std::size_t k = j + 1; k < lines.size(); ++k) {
        // A common point of all three must be the crossing of some
        // non-parallel pair among them.
        const std::array<std::array<std::size_t, 3>, 3> picks = {
            {{i, j, k}, {i, k, j}, {j, k, i}}};
        for (const auto& [p, q, r] : picks) {
          if (lines[p].slope == lines[q].slope) continue;
          const Rational cross = (lines[q].intercept - lines[p].intercept) /
                                 (lines[p].slope - lines[q].slope);
          if (lines[r].at(cross) == lines[p].at(cross)) {
            report.concurrent_triples.push_back({i, j, k});
          }
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace kstab
