#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace tapedyn {

// Where a float orbit came from and how far its samples can sit from the
// exact values they project.
struct OrbitPrecision {
  enum class Source : std::uint8_t { ExactRational, NativeFloat } source =
      Source::NativeFloat;
  double max_abs_error = 0.0;
};

// Finite sampled trajectory handed to the analyzers.
// source_terminated marks orbits whose producer stopped of its own accord
// (machine halted, certified loop, singularity) as opposed to reaching the
// requested step count; such orbits are classified Finite.
struct Orbit {
  std::vector<double> samples;
  OrbitPrecision precision;
  std::optional<std::pair<double, double>> bounds;
  bool source_terminated = false;
};

}  // namespace tapedyn
