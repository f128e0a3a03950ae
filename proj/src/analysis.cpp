#include "tapedyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace tapedyn {

namespace {

std::string interval_str(double lo, double hi) {
  return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

}  // namespace

DisjointnessViolation::DisjointnessViolation(std::size_t lower,
                                             double upper_of_lower_,
                                             double lower_of_upper_)
    : AnalysisError("clusters " + std::to_string(lower) + " and " +
                    std::to_string(lower + 1) + " interleave: " +
                    std::to_string(upper_of_lower_) + " >= " +
                    std::to_string(lower_of_upper_)),
      lower_cluster(lower),
      upper_of_lower(upper_of_lower_),
      lower_of_upper(lower_of_upper_) {}

std::size_t AnalysisParams::effective_window(std::size_t n) const {
  std::size_t w = window != 0 ? window : std::max<std::size_t>(64, n / 10);
  return std::min(w, n);
}

std::vector<std::uint32_t> assign_to_centroids(
    std::span<const double> points, std::span<const double> centroids) {
  if (centroids.empty())
    throw std::invalid_argument("assignment needs at least one centroid");
  std::vector<std::uint32_t> out;
  out.reserve(points.size());
  for (double p : points) {
    std::uint32_t best = 0;
    double best_d = std::fabs(p - centroids[0]);
    for (std::uint32_t c = 1; c < centroids.size(); ++c) {
      double d = std::fabs(p - centroids[c]);
      if (d < best_d) {  // strict: equal distance keeps the lower index
        best = c;
        best_d = d;
      }
    }
    out.push_back(best);
  }
  return out;
}

std::vector<std::pair<double, double>> build_intervals(
    std::span<const double> points, std::span<const std::uint32_t> assignments,
    std::size_t cluster_count) {
  if (points.size() != assignments.size())
    throw std::invalid_argument("one assignment per point required");
  std::vector<std::pair<double, double>> iv(
      cluster_count, {std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()});
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::uint32_t c = assignments[i];
    if (c >= cluster_count)
      throw std::invalid_argument("assignment index out of range");
    iv[c].first = std::min(iv[c].first, points[i]);
    iv[c].second = std::max(iv[c].second, points[i]);
  }
  for (std::size_t c = 0; c < cluster_count; ++c)
    if (!(iv[c].first <= iv[c].second))
      throw std::invalid_argument("cluster " + std::to_string(c) +
                                  " has no points");
  for (std::size_t c = 0; c + 1 < cluster_count; ++c)
    if (!(iv[c].second < iv[c + 1].first))
      throw DisjointnessViolation(c, iv[c].second, iv[c + 1].first);
  return iv;
}

ClusterDecomposition extract_cauchy_subsequences(const Orbit& orbit,
                                                 const AnalysisParams& params) {
  const std::size_t n = orbit.samples.size();
  const std::size_t w = params.effective_window(n);
  if (w < params.min_cluster)
    throw TooFewSamples("window of " + std::to_string(w) +
                        " samples cannot hold a cluster of " +
                        std::to_string(params.min_cluster));
  const std::size_t start = n - w;
  std::span<const double> tail(orbit.samples.data() + start, w);
  for (double x : tail)
    if (!std::isfinite(x))
      throw TrajectoryUndefined("tail window contains a non-finite sample");

  std::vector<double> sorted(tail.begin(), tail.end());
  std::sort(sorted.begin(), sorted.end());

  // split at gaps wider than gamma, keep runs meeting the minimum as clusters
  std::vector<double> centroids;
  std::size_t run_begin = 0;
  auto flush = [&](std::size_t end) {
    if (end - run_begin >= params.min_cluster) {
      double sum = std::accumulate(sorted.begin() + run_begin,
                                   sorted.begin() + end, 0.0);
      centroids.push_back(sum / double(end - run_begin));
    }
    run_begin = end;
  };
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] > params.gamma) flush(i);
  flush(sorted.size());
  if (centroids.empty())
    throw NoClusterMeetsMinimum("no gap-separated run of " +
                                std::to_string(params.min_cluster) +
                                " samples in the tail window");

  // Re-assignment can strand a centroid with no members when a wide cluster
  // sits next to a narrow one; such centroids are dropped and the assignment
  // repeated so every surviving cluster is nonempty.
  ClusterDecomposition d;
  d.params = params;
  d.window_start = start;
  for (;;) {
    d.assignments = assign_to_centroids(tail, centroids);
    std::vector<bool> used(centroids.size(), false);
    for (std::uint32_t a : d.assignments) used[a] = true;
    if (std::find(used.begin(), used.end(), false) == used.end()) break;
    std::vector<double> kept;
    for (std::size_t c = 0; c < centroids.size(); ++c)
      if (used[c]) kept.push_back(centroids[c]);
    centroids = std::move(kept);
  }
  d.centroids = std::move(centroids);
  d.intervals = build_intervals(tail, d.assignments, d.centroids.size());
  return d;
}

MixingReport mixing_check(const Orbit& orbit, const ClusterDecomposition& decomp,
                          std::size_t horizon) {
  const std::size_t k = decomp.cluster_count();
  MixingReport rep;
  rep.horizon = horizon;
  rep.transitions.assign(k, std::vector<std::uint64_t>(k, 0));
  rep.horizons.assign(k, std::vector<std::uint32_t>(k, 0));
  (void)orbit;  // labels were computed from its tail window already
  for (std::size_t i = 0; i + 1 < decomp.assignments.size(); ++i)
    ++rep.transitions[decomp.assignments[i]][decomp.assignments[i + 1]];

  // breadth-first over observed edges: horizons[i][j] = fewest steps i -> j
  for (std::size_t src = 0; src < k; ++src) {
    std::vector<std::size_t> frontier{src};
    std::vector<bool> seen(k, false);
    for (std::uint32_t depth = 1; depth <= horizon && !frontier.empty();
         ++depth) {
      std::vector<std::size_t> next;
      for (std::size_t u : frontier)
        for (std::size_t v = 0; v < k; ++v)
          if (rep.transitions[u][v] > 0 && !seen[v]) {
            seen[v] = true;
            rep.horizons[src][v] = depth;
            next.push_back(v);
          }
      frontier = std::move(next);
    }
  }
  rep.mixing = true;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (rep.horizons[i][j] == 0) rep.mixing = false;
  return rep;
}

bool density_check(std::span<const double> samples,
                   std::span<const std::pair<double, double>> intervals,
                   double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("resolution must be positive");
  for (const auto& [lo, hi] : intervals) {
    std::vector<double> inside;
    for (double s : samples)
      if (s >= lo && s <= hi) inside.push_back(s);
    std::sort(inside.begin(), inside.end());
    const double slack = eps * (1.0 + 1e-9);  // grid arithmetic rounding
    std::size_t cells = std::size_t(std::ceil((hi - lo) / eps));
    for (std::size_t kk = 0; kk <= cells; ++kk) {
      double g = std::min(lo + double(kk) * eps, hi);
      auto it = std::lower_bound(inside.begin(), inside.end(), g);
      bool covered = (it != inside.end() && *it - g <= slack) ||
                     (it != inside.begin() && g - *(it - 1) <= slack);
      if (!covered) return false;
    }
  }
  return true;
}

bool density_check(const Orbit& orbit, const ClusterDecomposition& decomp,
                   double eps) {
  std::span<const double> tail(orbit.samples.data() + decomp.window_start,
                               orbit.samples.size() - decomp.window_start);
  return density_check(tail, decomp.intervals, eps);
}

std::string label_name(OrbitLabel label, std::size_t cluster_count) {
  switch (label) {
    case OrbitLabel::Finite: return "Finite";
    case OrbitLabel::Unbounded: return "Unbounded";
    case OrbitLabel::Convergent: return "Convergent";
    case OrbitLabel::NonCauchyMixture:
      return "NonCauchyMixture(k=" + std::to_string(cluster_count) + ")";
    case OrbitLabel::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

ClassificationReport classify_orbit(const Orbit& orbit,
                                    const AnalysisParams& params) {
  ClassificationReport rep;
  rep.params = params;
  const auto& s = orbit.samples;
  for (double x : s)
    if (std::isnan(x)) throw TrajectoryUndefined("orbit contains NaN");

  if (s.size() < params.min_cluster || orbit.source_terminated) {
    rep.label = OrbitLabel::Finite;
    return rep;
  }

  bool inside = true;
  for (double x : s) {
    if (std::isinf(x)) inside = false;
    if (orbit.bounds && (x < orbit.bounds->first || x > orbit.bounds->second))
      inside = false;
  }
  if (!inside) {
    rep.label = OrbitLabel::Unbounded;
    return rep;
  }

  const std::size_t w = params.effective_window(s.size());
  rep.evidence.window = w;
  auto [mn, mx] = std::minmax_element(s.end() - w, s.end());
  rep.evidence.tail_diameter = *mx - *mn;
  if (rep.evidence.tail_diameter < params.epsilon) {
    rep.label = OrbitLabel::Convergent;
    rep.cluster_count = 1;
    return rep;
  }

  try {
    rep.decomposition = extract_cauchy_subsequences(orbit, params);
  } catch (const AnalysisError&) {
    rep.label = OrbitLabel::Inconclusive;
    return rep;
  }
  rep.cluster_count = rep.decomposition->cluster_count();

  std::unordered_set<double> values(s.begin(), s.end());
  rep.evidence.aperiodic = values.size() == s.size();
  rep.mixing_report = mixing_check(orbit, *rep.decomposition, params.horizon);
  rep.evidence.mixing = rep.mixing_report->mixing;
  rep.evidence.density = density_check(orbit, *rep.decomposition, params.epsilon);

  rep.label = (rep.cluster_count >= 2 && rep.evidence.aperiodic &&
               rep.evidence.mixing)
                  ? OrbitLabel::NonCauchyMixture
                  : OrbitLabel::Inconclusive;
  return rep;
}

double sensitivity_exponent(const MapSpec& map, double x0, double delta0,
                            std::uint64_t steps) {
  if (!(delta0 > 0.0) || !std::isfinite(delta0))
    throw std::invalid_argument("perturbation must be positive");
  if (steps == 0) throw std::invalid_argument("need at least one step");
  map.validate_start(x0);

  double x = x0;
  double y = x0 + delta0;
  if (y == x) y = std::nextafter(x, std::numeric_limits<double>::infinity());
  double sum = 0.0;
  std::uint64_t counted = 0;
  for (std::uint64_t t = 0; t < steps; ++t) {
    if (map.singular_at(x) || map.singular_at(y))
      throw TrajectoryUndefined("trajectory hit a pole");
    const double s0 = y - x;  // nonzero by construction of every reseed
    double fx = map.eval(x);
    double fy = map.eval(y);
    if (!std::isfinite(fx) || !std::isfinite(fy))
      throw TrajectoryUndefined("trajectory left float range");
    double d = fy - fx;
    x = fx;
    if (d == 0.0) {
      // flat spot: no growth sample; reseed the perturbation and move on
      y = fx + delta0;
      if (y == x) y = std::nextafter(fx, std::numeric_limits<double>::infinity());
      continue;
    }
    sum += std::log(std::fabs(d / s0));
    ++counted;
    y = fx + std::copysign(delta0, d);
    if (y == x)
      y = std::nextafter(fx, d > 0 ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity());
  }
  return counted == 0 ? 0.0 : sum / double(counted);
}

}  // namespace tapedyn
