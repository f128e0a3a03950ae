#include "tapedyn/maps.hpp"

#include <cmath>

namespace tapedyn {

MapSpec MapSpec::babylonian(double S) {
  if (!std::isfinite(S)) throw MapDomainError("babylonian parameter not finite");
  return MapSpec{BabylonianMap{S}};
}

MapSpec MapSpec::logistic(double r) {
  if (!(r >= 0.0 && r <= 4.0))
    throw MapDomainError("logistic parameter must lie in [0, 4]");
  return MapSpec{LogisticMap{r}};
}

MapSpec MapSpec::tangent() { return MapSpec{TanMap{}}; }

MapSpec MapSpec::affine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw MapDomainError("affine coefficients not finite");
  return MapSpec{AffineMap{a, b}};
}

double MapSpec::eval(double x) const {
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BabylonianMap>)
          return 0.5 * (x + m.S / x);
        else if constexpr (std::is_same_v<T, LogisticMap>)
          return m.r * x * (1.0 - x);
        else if constexpr (std::is_same_v<T, TanMap>)
          return std::tan(x);
        else
          return m.a * x + m.b;
      },
      v_);
}

double MapSpec::derivative(double x) const {
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BabylonianMap>)
          return 0.5 * (1.0 - m.S / (x * x));
        else if constexpr (std::is_same_v<T, LogisticMap>)
          return m.r * (1.0 - 2.0 * x);
        else if constexpr (std::is_same_v<T, TanMap>) {
          double t = std::tan(x);
          return 1.0 + t * t;
        } else {
          return m.a;
        }
      },
      v_);
}

bool MapSpec::singular_at(double x) const {
  // tan has no float pole: pi/2 is not representable, so tan stays finite.
  return std::holds_alternative<BabylonianMap>(v_) && x == 0.0;
}

void MapSpec::validate_start(double x0) const {
  if (!std::isfinite(x0)) throw MapDomainError("start point not finite");
  if (std::holds_alternative<BabylonianMap>(v_) && x0 == 0.0)
    throw MapDomainError("babylonian iteration cannot start at 0");
  if (std::holds_alternative<LogisticMap>(v_) && !(x0 > 0.0 && x0 < 1.0))
    throw MapDomainError("logistic iteration starts inside (0, 1)");
}

std::string MapSpec::name() const {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BabylonianMap>) return "babylonian";
        else if constexpr (std::is_same_v<T, LogisticMap>) return "logistic";
        else if constexpr (std::is_same_v<T, TanMap>) return "tangent";
        else return "affine";
      },
      v_);
}

std::optional<std::pair<double, double>> MapSpec::invariant_bounds() const {
  if (std::holds_alternative<LogisticMap>(v_))
    return std::make_pair(0.0, 1.0);
  return std::nullopt;
}

IterationRun iterate_map(const MapSpec& map, double x0, std::uint64_t steps) {
  map.validate_start(x0);
  IterationRun run;
  run.x0 = x0;
  run.requested_steps = steps;
  run.orbit.precision = {OrbitPrecision::Source::NativeFloat, 0.0};
  run.orbit.bounds = map.invariant_bounds();
  run.orbit.samples.reserve(steps + 1);
  run.orbit.samples.push_back(x0);
  double x = x0;
  for (std::uint64_t t = 1; t <= steps; ++t) {
    if (map.singular_at(x)) {
      run.termination = Termination::SingularityHit;
      run.terminated_at = t - 1;
      // a trajectory that ran into a pole ended of its own accord
      run.orbit.source_terminated = true;
      return run;
    }
    double next = map.eval(x);
    if (!std::isfinite(next)) {
      // overflow is unboundedness, not a natural stop, so the orbit is not
      // marked terminated; the offending value is not recorded
      run.termination = Termination::Overflowed;
      run.terminated_at = t - 1;
      return run;
    }
    run.orbit.samples.push_back(next);
    x = next;
  }
  return run;
}

ContractionReport contraction_estimate(const MapSpec& map, double lo, double hi,
                                       std::size_t samples) {
  if (!(lo < hi)) throw std::invalid_argument("need lo < hi");
  if (samples < 2) throw std::invalid_argument("need at least 2 grid samples");
  std::vector<double> xs;
  xs.reserve(2 * samples - 1);
  for (std::size_t i = 0; i < samples; ++i)
    xs.push_back(lo + (hi - lo) * double(i) / double(samples - 1));
  for (std::size_t i = 0; i + 1 < samples; ++i)
    xs.push_back(0.5 * (xs[i] + xs[i + 1]));
  std::vector<double> fs;
  fs.reserve(xs.size());
  for (double x : xs) {
    if (map.singular_at(x))
      throw MapDomainError("map has a pole inside the window");
    double f = map.eval(x);
    if (!std::isfinite(f))
      throw MapDomainError("map not finite on the window");
    fs.push_back(f);
  }
  ContractionReport rep;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      double dx = xs[i] - xs[j];
      if (dx == 0.0) continue;
      double ratio = std::fabs((fs[i] - fs[j]) / dx);
      rep.q_hat = std::max(rep.q_hat, ratio);
      ++rep.pairs;
    }
  }
  rep.contraction = rep.q_hat < 1.0;
  return rep;
}

}  // namespace tapedyn
