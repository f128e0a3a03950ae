#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "tapedyn/orbit.hpp"

namespace tapedyn {

class MapDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BabylonianMap {
  double S = 2.0;  // x' = (x + S/x) / 2, singular at x = 0
};
struct LogisticMap {
  double r = 4.0;  // x' = r x (1 - x), r in [0, 4]
};
struct TanMap {};  // x' = tan(x)
struct AffineMap {
  double a = 1.0, b = 0.0;  // x' = a x + b (test fixture with known exponent)
};

class MapSpec {
 public:
  static MapSpec babylonian(double S);
  static MapSpec logistic(double r);  // MapDomainError unless r in [0, 4]
  static MapSpec tangent();
  static MapSpec affine(double a, double b);

  double eval(double x) const;        // may return non-finite values
  double derivative(double x) const;
  bool singular_at(double x) const;   // Babylonian pole at x = 0

  // Throws MapDomainError for invalid starting points:
  // Babylonian x0 != 0, logistic x0 in (0, 1).
  void validate_start(double x0) const;

  std::string name() const;
  const std::variant<BabylonianMap, LogisticMap, TanMap, AffineMap>& spec()
      const {
    return v_;
  }
  // Known invariant range of the dynamics, when there is one (logistic [0,1]).
  std::optional<std::pair<double, double>> invariant_bounds() const;

 private:
  explicit MapSpec(std::variant<BabylonianMap, LogisticMap, TanMap, AffineMap> v)
      : v_(std::move(v)) {}
  std::variant<BabylonianMap, LogisticMap, TanMap, AffineMap> v_;
};

enum class Termination : std::uint8_t { Completed, SingularityHit, Overflowed };

struct IterationRun {
  double x0 = 0.0;
  std::uint64_t requested_steps = 0;
  Orbit orbit;  // orbit.samples[0] == x0, size <= requested_steps + 1
  Termination termination = Termination::Completed;
  std::uint64_t terminated_at = 0;  // step index when not Completed
};

// Iterates the map, stopping early at a pole (SingularityHit) or when the
// next value is not finite (Overflowed); the offending value is not recorded.
IterationRun iterate_map(const MapSpec& map, double x0, std::uint64_t steps);

struct ContractionReport {
  double q_hat = 0.0;  // max |f(x)-f(y)| / |x-y| over sampled pairs
  bool contraction = false;
  std::uint64_t pairs = 0;
};

// Samples a deterministic grid over [lo, hi] plus midpoints and bounds the
// Lipschitz ratio from below. Throws MapDomainError if the map is undefined
// or non-finite anywhere on the grid.
ContractionReport contraction_estimate(const MapSpec& map, double lo, double hi,
                                       std::size_t samples = 256);

}  // namespace tapedyn
