#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qssf/series.hpp"
#include "qssf/vec3.hpp"

namespace qssf {

struct DiffGeoOptions {
  // Samples with |v| below this magnitude are flagged invalid: the angular
  // rate is undefined at the origin.
  double v_floor{1e-6};
  // A sample step larger than jump_ratio times the median step (and larger
  // than jump_floor) is treated as a discontinuity; differentiation stencils
  // straddling it are flagged invalid.
  double jump_ratio{10.0};
  double jump_floor{1e-9};
};

// Fourth-order central difference in the interior, fourth-order one-sided
// stencils at the four edge samples.  Requires at least 5 samples.
inline std::vector<double> derivative(const std::vector<double>& f, double dt) {
  const std::size_t n = f.size();
  if (n < 5) throw std::invalid_argument("derivative: need at least 5 samples");
  if (dt <= 0.0) throw std::invalid_argument("derivative: dt must be positive");

  const double h12 = 12.0 * dt;
  std::vector<double> d(n);
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / h12;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / h12;
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / h12;
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / h12;
  d[n - 1] =
      (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) /
      h12;
  return d;
}

// Differentiates every channel of a series.
inline UniformSeries derivative(const UniformSeries& s) {
  check_uniform(s);
  UniformSeries out = s;
  for (auto& c : out.channels) c.samples = derivative(c.samples, s.dt);
  return out;
}

// Indices b such that the step from sample b-1 to sample b is anomalously
// large (vector step over the first three channels).
inline std::vector<std::size_t> detect_jumps(const UniformSeries& s,
                                             const DiffGeoOptions& opt = {}) {
  check_uniform(s);
  const std::size_t n = s.size();
  if (n < 2 || s.channels.size() < 3) return {};

  std::vector<double> step(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) step[i] = (s.vec_at(i + 1) - s.vec_at(i)).norm();

  std::vector<double> sorted = step;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double threshold = std::max(opt.jump_ratio * median, opt.jump_floor);

  std::vector<std::size_t> jumps;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (step[i] > threshold) jumps.push_back(i + 1);
  }
  return jumps;
}

// Instantaneous angular-rate sample.  `valid` is false where the rate cannot
// be trusted: |v| below the floor, or a differentiation stencil that crosses
// a detected discontinuity.
struct OmegaSample {
  double t{0.0};
  Vec3 omega{};      // rad/s, direction = instantaneous rotation axis
  double v_mag{0.0}; // |v| at the sample
  bool valid{true};
};

struct OmegaTrace {
  double t0{0.0};
  double dt{0.0};
  std::vector<OmegaSample> samples;

  std::size_t size() const { return samples.size(); }
  double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

namespace detail {

// Inclusive index range touched by the differentiation stencil at sample i.
inline std::pair<std::size_t, std::size_t> stencil_range(std::size_t i, std::size_t n) {
  if (i <= 1) return {0, 4};
  if (i + 2 >= n) return {n - 5, n - 1};
  return {i - 2, i + 2};
}

inline void flag_jump_stencils(std::vector<OmegaSample>& samples,
                               const std::vector<std::size_t>& jumps) {
  const std::size_t n = samples.size();
  for (std::size_t b : jumps) {
    // Stencil [lo, hi] straddles the discontinuity between b-1 and b
    // iff lo < b <= hi; with the widest stencil that is i in [b-2, b+1].
    const std::size_t lo = b >= 4 ? b - 4 : 0;
    const std::size_t hi = std::min(n - 1, b + 3);
    for (std::size_t i = lo; i <= hi; ++i) {
      const auto [s_lo, s_hi] = stencil_range(i, n);
      if (s_lo < b && b <= s_hi) samples[i].valid = false;
    }
  }
}

}  // namespace detail

// Geometric instantaneous angular rate w = (v x v') / |v|^2 for every sample
// of an alpha-beta-gamma series.
inline OmegaTrace omega_v(const UniformSeries& s, const DiffGeoOptions& opt = {}) {
  check_uniform(s);
  if (s.channels.size() < 3) throw std::invalid_argument("omega_v: need 3 vector channels");
  const std::size_t n = s.size();
  if (n < 5) throw std::invalid_argument("omega_v: need at least 5 samples");

  const UniformSeries ds = derivative(s);
  OmegaTrace trace;
  trace.t0 = s.t0;
  trace.dt = s.dt;
  trace.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    OmegaSample& o = trace.samples[i];
    const Vec3 v = s.vec_at(i);
    const Vec3 dv = ds.vec_at(i);
    o.t = s.time_at(i);
    o.v_mag = v.norm();
    if (o.v_mag < opt.v_floor) {
      o.valid = false;
      o.omega = Vec3{};
    } else {
      o.omega = v.cross(dv) / v.squared_norm();
    }
  }
  detail::flag_jump_stencils(trace.samples, detect_jumps(s, opt));
  return trace;
}

// Cumulative arc length s(t) = integral of |v| dt (trapezoidal rule).  The
// voltage vector is the tangent of the flux trajectory, so |v| is the speed
// along that curve and s carries units of per-unit-seconds.
inline std::vector<double> arc_length(const UniformSeries& s) {
  check_uniform(s);
  if (s.channels.size() < 3) throw std::invalid_argument("arc_length: need 3 vector channels");
  const std::size_t n = s.size();
  std::vector<double> speed(n), arc(n);
  for (std::size_t i = 0; i < n; ++i) speed[i] = s.vec_at(i).norm();
  arc[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    arc[i] = arc[i - 1] + 0.5 * (speed[i - 1] + speed[i]) * s.dt;
  return arc;
}

// Flux-trajectory curvature kappa = |v x v'| / |v|^3.  Samples below the
// magnitude floor get a quiet NaN.
inline std::vector<double> curvature(const UniformSeries& s, const DiffGeoOptions& opt = {}) {
  check_uniform(s);
  if (s.channels.size() < 3) throw std::invalid_argument("curvature: need 3 vector channels");
  const UniformSeries ds = derivative(s);
  const std::size_t n = s.size();
  std::vector<double> kappa(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 v = s.vec_at(i);
    const double mag = v.norm();
    if (mag < opt.v_floor) {
      kappa[i] = std::numeric_limits<double>::quiet_NaN();
    } else {
      kappa[i] = v.cross(ds.vec_at(i)).norm() / (mag * mag * mag);
    }
  }
  return kappa;
}

struct GeometryTrace {
  OmegaTrace omega;
  std::vector<double> arc;    // cumulative arc length
  std::vector<double> kappa;  // curvature, NaN below the magnitude floor
};

inline GeometryTrace geometry_trace(const UniformSeries& s, const DiffGeoOptions& opt = {}) {
  GeometryTrace g;
  g.omega = omega_v(s, opt);
  g.arc = arc_length(s);
  g.kappa = curvature(s, opt);
  return g;
}

}  // namespace qssf
