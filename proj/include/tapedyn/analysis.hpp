#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tapedyn/maps.hpp"
#include "tapedyn/orbit.hpp"

namespace tapedyn {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class TooFewSamples : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};
class NoClusterMeetsMinimum : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};
class DisjointnessViolation : public AnalysisError {
 public:
  DisjointnessViolation(std::size_t lower_cluster, double upper_of_lower,
                        double lower_of_upper);
  std::size_t lower_cluster;  // offending pair (i, i+1)
  double upper_of_lower, lower_of_upper;
};
class TrajectoryUndefined : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

struct AnalysisParams {
  double epsilon = 1e-6;        // convergence / resolution scale
  double gamma = 1e-5;          // cluster gap threshold (10 * epsilon)
  std::size_t min_cluster = 8;  // minimum tail members per cluster
  std::size_t window = 0;       // tail window; 0 = max(64, n/10), capped at n
  std::size_t horizon = 8;      // mixing reachability horizon

  std::size_t effective_window(std::size_t n) const;
};

// Greedy finite-horizon Cauchy-subsequence extraction: sort the tail window,
// split at gaps > gamma, keep clusters of at least min_cluster members, take
// centroids as tail means, then re-assign every tail sample to the nearest
// centroid (ties to the lower index) and build the enclosing intervals.
struct ClusterDecomposition {
  std::vector<double> centroids;                    // ascending
  std::vector<std::pair<double, double>> intervals; // strictly disjoint
  std::vector<std::uint32_t> assignments;           // per tail-window sample
  std::size_t window_start = 0;                     // orbit index of tail[0]
  AnalysisParams params;

  std::size_t cluster_count() const { return centroids.size(); }
  // Psi: the union of the intervals (disjoint, so the list itself).
  const std::vector<std::pair<double, double>>& psi() const { return intervals; }
};

ClusterDecomposition extract_cauchy_subsequences(const Orbit& orbit,
                                                 const AnalysisParams& params);

// Nearest-centroid assignment, ties to the lower index.
// Throws std::invalid_argument on empty centroids.
std::vector<std::uint32_t> assign_to_centroids(std::span<const double> points,
                                               std::span<const double> centroids);

// Enclosing [min, max] per cluster, verifying strict disjointness
// u_i < l_{i+1} (DisjointnessViolation names the offending pair).
// Clusters must be nonempty (std::invalid_argument otherwise).
std::vector<std::pair<double, double>> build_intervals(
    std::span<const double> points, std::span<const std::uint32_t> assignments,
    std::size_t cluster_count);

struct MixingReport {
  std::vector<std::vector<std::uint64_t>> transitions;  // k x k counts
  std::vector<std::vector<std::uint32_t>> horizons;     // min steps, 0 = never
  bool mixing = false;
  std::size_t horizon = 0;
};

// Builds the cluster-label transition relation from consecutive tail samples
// and reports whether every ordered pair is reachable within the horizon.
MixingReport mixing_check(const Orbit& orbit, const ClusterDecomposition& decomp,
                          std::size_t horizon);

// True iff every grid point (resolution eps) of every interval has an orbit
// sample within eps of it, using the samples lying inside that interval.
bool density_check(std::span<const double> samples,
                   std::span<const std::pair<double, double>> intervals,
                   double eps);
bool density_check(const Orbit& orbit, const ClusterDecomposition& decomp,
                   double eps);

enum class OrbitLabel : std::uint8_t {
  Finite,
  Unbounded,
  Convergent,
  NonCauchyMixture,
  Inconclusive,
};

std::string label_name(OrbitLabel label, std::size_t cluster_count);

struct ClassificationReport {
  OrbitLabel label = OrbitLabel::Inconclusive;
  std::size_t cluster_count = 0;  // k for NonCauchyMixture, else best effort
  struct Evidence {
    double tail_diameter = 0.0;
    bool aperiodic = false;  // no exact sample repeat anywhere in the orbit
    bool mixing = false;
    bool density = false;
    std::size_t window = 0;
  } evidence;
  std::optional<ClusterDecomposition> decomposition;
  std::optional<MixingReport> mixing_report;
  AnalysisParams params;
};

// Decision ladder: Finite (too few samples or terminated source), Unbounded
// (exits declared bounds), Convergent (tail diameter < epsilon),
// NonCauchyMixture (k >= 2 disjoint intervals, aperiodic, mixing), else
// Inconclusive.
ClassificationReport classify_orbit(const Orbit& orbit,
                                    const AnalysisParams& params = {});

// Two-trajectory separation exponent with per-step renormalization of the
// separation back to delta0; positive values indicate sensitive dependence.
// Steps where x + delta0 == x in float are skipped and the perturbation is
// re-seeded and contribute no sample. Throws TrajectoryUndefined if either
// trajectory leaves the map's domain.
double sensitivity_exponent(const MapSpec& map, double x0, double delta0,
                            std::uint64_t steps);

}  // namespace tapedyn
