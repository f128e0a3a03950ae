#include <doctest.h>

#include <cmath>
#include <vector>

#include "tapedyn/analysis.hpp"

using namespace tapedyn;

namespace {

Orbit make_orbit(std::vector<double> samples) {
  Orbit o;
  o.samples = std::move(samples);
  return o;
}

}  // namespace

TEST_CASE("window defaults to a tenth of the orbit, at least 64") {
  AnalysisParams p;
  CHECK(p.effective_window(1000) == 100);
  CHECK(p.effective_window(100) == 64);
  CHECK(p.effective_window(50) == 50);
  p.window = 10;
  CHECK(p.effective_window(1000) == 10);
  p.window = 5000;
  CHECK(p.effective_window(1000) == 1000);
}

TEST_CASE("a vanishing sequence extracts one cluster at zero") {
  std::vector<double> s;
  for (int i = 0; i < 200; ++i) s.push_back(std::pow(2.0, -i));
  auto d = extract_cauchy_subsequences(make_orbit(s), {});
  REQUIRE(d.cluster_count() == 1);
  CHECK(d.centroids[0] < 1e-30);
  CHECK(d.intervals[0].first >= 0.0);
  CHECK(d.intervals[0].second < 1e-30);
  CHECK(d.window_start == 136);  // 200 - max(64, 20)
  CHECK(d.assignments.size() == 64);
}

TEST_CASE("two interleaved convergent subsequences split cleanly") {
  std::vector<double> s;
  for (int i = 0; i < 1000; ++i)
    s.push_back(i % 2 == 0 ? 1.0 / (i + 4) : 1.0 - 1.0 / (i + 3));
  auto orbit = make_orbit(s);
  auto d = extract_cauchy_subsequences(orbit, {});
  REQUIRE(d.cluster_count() == 2);
  CHECK(d.centroids[0] < 0.01);
  CHECK(d.centroids[1] > 0.99);
  CHECK(d.intervals[0].second < d.intervals[1].first);
  // tail alternates between the clusters sample by sample
  for (std::size_t i = 0; i + 1 < d.assignments.size(); ++i)
    CHECK(d.assignments[i] != d.assignments[i + 1]);
  CHECK(d.psi().size() == 2);

  auto mix = mixing_check(orbit, d, 8);
  CHECK(mix.mixing);
  CHECK(mix.transitions[0][1] > 0);
  CHECK(mix.transitions[1][0] > 0);
  CHECK(mix.transitions[0][0] == 0);
  CHECK(mix.horizons[0][1] == 1);
  CHECK(mix.horizons[1][0] == 1);
  CHECK(mix.horizons[0][0] == 2);
  CHECK(mix.horizons[1][1] == 2);

  auto rep = classify_orbit(orbit);
  CHECK(rep.label == OrbitLabel::NonCauchyMixture);
  CHECK(rep.cluster_count == 2);
  CHECK(rep.evidence.aperiodic);
  CHECK(rep.evidence.mixing);
  CHECK(label_name(rep.label, rep.cluster_count) == "NonCauchyMixture(k=2)");
}

TEST_CASE("three-phase rotation yields three mixing clusters") {
  const double centers[3] = {0.1, 0.5, 0.9};
  std::vector<double> s;
  for (int i = 0; i < 1200; ++i) s.push_back(centers[i % 3] + 1.0 / (i + 10));
  auto orbit = make_orbit(s);
  auto rep = classify_orbit(orbit);
  CHECK(rep.label == OrbitLabel::NonCauchyMixture);
  REQUIRE(rep.cluster_count == 3);
  const auto& d = *rep.decomposition;
  for (int c = 0; c < 3; ++c)
    CHECK(d.centroids[c] == doctest::Approx(centers[c] + 0.00088).epsilon(0.01));
  // the cycle returns to each phase in exactly three steps
  const auto& mix = *rep.mixing_report;
  CHECK(mix.horizons[0][0] == 3);
  CHECK(mix.horizons[1][1] == 3);
  CHECK(mix.horizons[0][1] == 1);
  CHECK(mix.horizons[0][2] == 2);
}

TEST_CASE("nearest-centroid ties go to the lower index") {
  std::vector<double> pts{0.5, 0.1, 0.9};
  std::vector<double> cents{0.4, 0.6};
  auto a = assign_to_centroids(pts, cents);
  REQUIRE(a.size() == 3);
  CHECK(a[0] == 0);  // equidistant
  CHECK(a[1] == 0);
  CHECK(a[2] == 1);
  CHECK_THROWS_AS(assign_to_centroids(pts, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("interval construction rejects interleaved clusters") {
  std::vector<double> pts{0.0, 1.0, 0.45, 0.55};
  std::vector<std::uint32_t> asg{0, 0, 1, 1};
  try {
    build_intervals(pts, asg, 2);
    FAIL("expected DisjointnessViolation");
  } catch (const DisjointnessViolation& v) {
    CHECK(v.lower_cluster == 0);
    CHECK(v.upper_of_lower == 1.0);
    CHECK(v.lower_of_upper == 0.45);
  }
  CHECK_THROWS_AS(build_intervals(pts, asg, 3), std::invalid_argument);
}

TEST_CASE("nearest-centroid assignments always produce disjoint intervals") {
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  auto next = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return double(state >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> cents;
    for (int c = 0; c < 1 + trial % 5; ++c) cents.push_back(next() * 10);
    std::sort(cents.begin(), cents.end());
    cents.erase(std::unique(cents.begin(), cents.end()), cents.end());
    std::vector<double> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(next() * 10);
    auto a = assign_to_centroids(pts, cents);
    // drop empty clusters, then intervals must be strictly disjoint
    std::vector<std::uint32_t> remap(cents.size(), 0);
    std::vector<bool> used(cents.size(), false);
    for (auto c : a) used[c] = true;
    std::uint32_t k = 0;
    for (std::size_t c = 0; c < cents.size(); ++c)
      if (used[c]) remap[c] = k++;
    for (auto& c : a) c = remap[c];
    CHECK_NOTHROW(build_intervals(pts, a, k));
  }
}

TEST_CASE("density holds exactly at the sample resolution") {
  std::vector<double> one{0.5};
  std::vector<std::pair<double, double>> point{{0.5, 0.5}};
  CHECK(density_check(one, point, 0.01));

  std::vector<double> two{0.1, 0.12};
  std::vector<std::pair<double, double>> iv{{0.1, 0.12}};
  CHECK(density_check(two, iv, 0.01));
  CHECK_FALSE(density_check(two, iv, 0.005));

  // no sample inside the interval at all
  std::vector<std::pair<double, double>> empty_iv{{0.3, 0.4}};
  CHECK_FALSE(density_check(two, empty_iv, 0.05));
}

TEST_CASE("an exact float cycle is never called a mixture") {
  std::vector<double> s;
  for (int i = 0; i < 100; ++i) s.push_back(i % 2 == 0 ? 0.25 : 0.75);
  auto rep = classify_orbit(make_orbit(s));
  CHECK(rep.label == OrbitLabel::Inconclusive);
  CHECK(rep.cluster_count == 2);
  CHECK_FALSE(rep.evidence.aperiodic);
  CHECK(rep.evidence.mixing);  // the 2-cycle itself mixes; exactness vetoes
}

TEST_CASE("classification ladder endpoints") {
  // too few samples
  CHECK(classify_orbit(make_orbit({0.1, 0.2, 0.3})).label == OrbitLabel::Finite);
  // producer stopped on its own
  Orbit halted = make_orbit(std::vector<double>(100, 0.5));
  halted.source_terminated = true;
  CHECK(classify_orbit(halted).label == OrbitLabel::Finite);
  // leaves declared bounds
  Orbit out = make_orbit(std::vector<double>(100, 0.5));
  out.samples[50] = 1.5;
  out.bounds = {0.0, 1.0};
  CHECK(classify_orbit(out).label == OrbitLabel::Unbounded);
  // infinite sample is unbounded even without declared bounds
  Orbit inf_orbit = make_orbit(std::vector<double>(100, 0.5));
  inf_orbit.samples[3] = INFINITY;
  CHECK(classify_orbit(inf_orbit).label == OrbitLabel::Unbounded);
  // NaN is not a trajectory
  Orbit bad = make_orbit(std::vector<double>(100, 0.5));
  bad.samples[7] = NAN;
  CHECK_THROWS_AS(classify_orbit(bad), TrajectoryUndefined);
  // convergent tail
  std::vector<double> conv;
  for (int i = 0; i < 200; ++i) conv.push_back(std::pow(2.0, -i));
  auto rep = classify_orbit(make_orbit(conv));
  CHECK(rep.label == OrbitLabel::Convergent);
  CHECK(rep.cluster_count == 1);
  CHECK(rep.evidence.tail_diameter < 1e-40);
  CHECK(rep.evidence.window == 64);
  // scattered singletons stay inconclusive
  std::vector<double> scat;
  for (int i = 0; i < 100; ++i) scat.push_back(i * 0.001);
  auto sc = classify_orbit(make_orbit(scat));
  CHECK(sc.label == OrbitLabel::Inconclusive);
  CHECK(sc.cluster_count == 0);
}

TEST_CASE("extraction failure modes carry their own types") {
  CHECK_THROWS_AS(extract_cauchy_subsequences(make_orbit({0.1, 0.2}), {}),
                  TooFewSamples);
  std::vector<double> scat;
  for (int i = 0; i < 100; ++i) scat.push_back(i * 0.001);
  CHECK_THROWS_AS(extract_cauchy_subsequences(make_orbit(scat), {}),
                  NoClusterMeetsMinimum);
  std::vector<double> nan_tail(100, 0.5);
  nan_tail[99] = NAN;
  CHECK_THROWS_AS(extract_cauchy_subsequences(make_orbit(nan_tail), {}),
                  TrajectoryUndefined);
}

TEST_CASE("separation exponent skips flat spots instead of diverging") {
  // constant map: both trajectories collapse to b, separation is always 0,
  // so every step is a reseeded skip and the estimate is empty -> 0
  CHECK(sensitivity_exponent(MapSpec::affine(0.0, 0.7), 0.3, 1e-9, 100) == 0.0);
}

TEST_CASE("separation exponent oracles") {
  // identity: separation never grows
  CHECK(sensitivity_exponent(MapSpec::affine(1.0, 0.0), 0.3, 1e-9, 1000) == 0.0);
  // pure halving: every step contributes exactly ln(1/2)
  CHECK(sensitivity_exponent(MapSpec::affine(0.5, 0.0), 0.3, 1e-9, 1000) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));
  // contracting toward 0.3/1.8: orbit stays O(1), exponent ln|a|
  CHECK(sensitivity_exponent(MapSpec::affine(-0.8, 0.3), 0.3, 1e-9, 2000) ==
        doctest::Approx(std::log(0.8)).epsilon(1e-5));
  // full logistic chaos doubles separation per step on average
  double lam = sensitivity_exponent(MapSpec::logistic(4.0), 0.2, 1e-9, 20000);
  CHECK(lam == doctest::Approx(std::log(2.0)).epsilon(0.10));
  // (x - 1/x)/2 is conjugate to angle doubling; same exponent, with huge
  // excursions that exercise the renormalization guard
  double bab = sensitivity_exponent(MapSpec::babylonian(-1.0), 1.3, 1e-9, 50000);
  CHECK(bab == doctest::Approx(std::log(2.0)).epsilon(0.10));
  CHECK_THROWS_AS(sensitivity_exponent(MapSpec::affine(1, 0), 0.3, 0.0, 100),
                  std::invalid_argument);
}

TEST_CASE("explicit window overrides the tail heuristic") {
  std::vector<double> s(300, 0.0);
  for (int i = 0; i < 300; ++i) s[i] = (i < 250) ? (i % 2 ? 10.0 : -10.0) : 5.0;
  AnalysisParams p;
  p.window = 40;  // tail sees only the settled segment
  auto rep = classify_orbit(make_orbit(s), p);
  CHECK(rep.label == OrbitLabel::Convergent);
  CHECK(rep.evidence.window == 40);
}
