#include "tapedyn/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace tapedyn {

namespace {

// Piecewise polynomial on shared breakpoints; seg[i] holds power-basis
// coefficients in the local variable u = t - pts[i], which keeps the
// integration arithmetic well conditioned.
struct Piecewise {
  std::vector<double> pts;                // m+1 ascending breakpoints
  std::vector<std::vector<double>> seg;   // m segments
};

double eval_local(const std::vector<double>& c, double u) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * u + c[k];
  return v;
}

// Antiderivative with A(pts[0]) = 0; each segment's constant term is the
// accumulated value at its left breakpoint.
Piecewise antiderivative(const Piecewise& f) {
  Piecewise a;
  a.pts = f.pts;
  a.seg.resize(f.seg.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.seg.size(); ++i) {
    auto& c = a.seg[i];
    c.assign(f.seg[i].size() + 1, 0.0);
    c[0] = acc;
    for (std::size_t k = 0; k < f.seg[i].size(); ++k)
      c[k + 1] = f.seg[i][k] / double(k + 1);
    acc = eval_local(c, f.pts[i + 1] - f.pts[i]);
  }
  return a;
}

double value_at_breakpoint(const Piecewise& f, double x) {
  for (std::size_t i = 0; i < f.seg.size(); ++i)
    if (f.pts[i] == x) return eval_local(f.seg[i], 0.0);
  return eval_local(f.seg.back(), f.pts.back() - f.pts[f.seg.size() - 1]);
}

// H(t) = A(clamp(t, lo, hi)) - A(lo); lo and hi are breakpoints, so no
// segment straddles the clamp boundaries.
Piecewise clamp_diff(const Piecewise& a, double lo, double hi) {
  Piecewise h;
  h.pts = a.pts;
  h.seg.resize(a.seg.size());
  const double a_lo = value_at_breakpoint(a, lo);
  const double a_hi = value_at_breakpoint(a, hi);
  for (std::size_t i = 0; i < a.seg.size(); ++i) {
    if (a.pts[i + 1] <= lo) {
      h.seg[i] = {0.0};
    } else if (a.pts[i] >= hi) {
      h.seg[i] = {a_hi - a_lo};
    } else {
      h.seg[i] = a.seg[i];
      h.seg[i][0] -= a_lo;
    }
  }
  return h;
}

double uniform01(std::mt19937_64& rng) {
  // top 53 bits give the same dyadic uniforms on every platform
  return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<double> sequence_to_space(std::span<const double> limits,
                                      std::size_t n) {
  if (limits.empty())
    throw std::invalid_argument("need at least one limit value");
  if (n < limits.size())
    throw std::invalid_argument("space dimension below the limit count");
  for (std::size_t i = 0; i < limits.size(); ++i) {
    if (!(limits[i] >= 0.0 && limits[i] <= 1.0))
      throw std::invalid_argument("limits must lie in [0, 1]");
    if (i > 0 && limits[i] < limits[i - 1])
      throw std::invalid_argument("limits must ascend");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = limits[std::min(i, limits.size() - 1)];
  return out;
}

MeasureResult sequence_measure_box(const Box& box, const McParams& mc) {
  const std::size_t n = box.lo.size();
  if (n == 0 || box.hi.size() != n)
    throw std::invalid_argument("box needs matching nonempty lo/hi");
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(box.lo[i]) || std::isnan(box.hi[i]))
      throw std::invalid_argument("box bounds must be numbers");
    lo[i] = std::clamp(box.lo[i], 0.0, 1.0);
    hi[i] = std::clamp(box.hi[i], 0.0, 1.0);
  }

  MeasureResult res;
  for (std::size_t i = 0; i < n; ++i)
    if (lo[i] > hi[i]) {
      res.exact = true;
      return res;
    }

  if (n <= 3) {
    std::vector<double> pts{0.0, 1.0};
    pts.insert(pts.end(), lo.begin(), lo.end());
    pts.insert(pts.end(), hi.begin(), hi.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    Piecewise g;
    g.pts = pts;
    g.seg.assign(pts.size() - 1, {1.0});
    for (std::size_t k = 0; k < n; ++k)
      g = clamp_diff(antiderivative(g), lo[k], hi[k]);
    double vol = eval_local(g.seg.back(), g.pts.back() - g.pts[g.seg.size() - 1]);
    double fact = 1.0;
    for (std::size_t k = 2; k <= n; ++k) fact *= double(k);
    res.value = std::max(0.0, fact * vol);
    res.exact = true;
    return res;
  }

  if (mc.samples == 0)
    throw std::invalid_argument("need at least one sample");
  std::mt19937_64 rng(mc.seed);
  std::vector<double> r(n);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < mc.samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) r[i] = uniform01(rng);
    std::sort(r.begin(), r.end());
    bool in = true;
    for (std::size_t i = 0; i < n && in; ++i)
      in = r[i] >= lo[i] && r[i] <= hi[i];
    hits += in ? 1 : 0;
  }
  res.value = double(hits) / double(mc.samples);
  res.std_error =
      std::sqrt(res.value * (1.0 - res.value) / double(mc.samples));
  res.exact = false;
  res.samples = mc.samples;
  return res;
}

DiagonalEstimate mc_near_diagonal_fraction(std::size_t n, double delta,
                                           std::uint64_t samples,
                                           std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("need at least one coordinate");
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  std::mt19937_64 rng(seed);
  DiagonalEstimate est;
  est.samples = samples;
  for (std::uint64_t s = 0; s < samples; ++s) {
    double mn = 2.0, mx = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double x = uniform01(rng);
      mn = std::min(mn, x);
      mx = std::max(mx, x);
    }
    if (mx - mn < delta) ++est.hits;
  }
  est.fraction = double(est.hits) / double(samples);
  est.std_error =
      std::sqrt(est.fraction * (1.0 - est.fraction) / double(samples));
  return est;
}

}  // namespace tapedyn
