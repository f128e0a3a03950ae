#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tapedyn {

// Embeds an ascending finite sequence of limits into n coordinates:
// r_k = limits[k] for k < m, r_k = limits[m-1] for k >= m (the final limit
// pads the tail). Requires 1 <= m <= n, limits ascending within [0, 1].
std::vector<double> sequence_to_space(std::span<const double> limits,
                                      std::size_t n);

struct Box {
  std::vector<double> lo, hi;  // per-coordinate bounds, clamped to [0, 1]
};

struct McParams {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
};

struct MeasureResult {
  double value = 0.0;
  double std_error = 0.0;  // 0 when exact
  bool exact = false;
  std::uint64_t samples = 0;  // 0 when exact
};

// Measure of box intersected with the ascending region {r_1 <= ... <= r_n},
// normalized so the whole region has measure 1 (n! times the raw volume).
// Exact piecewise-polynomial integration for n <= 3, seeded Monte Carlo with
// standard error above that. Empty boxes yield 0.
MeasureResult sequence_measure_box(const Box& box, const McParams& mc = {});

struct DiagonalEstimate {
  double fraction = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

// Draws `samples` uniform n-tuples and returns the fraction whose sorted
// range (max - min) is strictly below delta. Deterministic for a fixed seed.
DiagonalEstimate mc_near_diagonal_fraction(std::size_t n, double delta,
                                           std::uint64_t samples,
                                           std::uint64_t seed);

}  // namespace tapedyn
