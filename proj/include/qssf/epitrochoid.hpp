#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qssf/series.hpp"
#include "qssf/synth.hpp"

namespace qssf {

// Rolling-circle parameters of the trajectory traced by a fundamental plus a
// single positive-sequence harmonic of order h:
//   fixed circle radius R = V (1 - 1/h), rolling circle radius r = V / h,
//   pen offset d = V_h.
struct EpitrochoidParams {
  double d{0.0};
  double r{0.0};
  double R{0.0};
  double order{0.0};
  std::size_t n_critical{0};  // number of candidate crunode angles, h - 1
};

enum class TrajectoryKind {
  curtate,     // d < r: convex loop, no self-intersections
  epicycloid,  // d = r: cusps at the critical angles
  prolate,     // d > r: crunodes (self-intersections) at the critical angles
};

struct TrajectoryClass {
  TrajectoryKind kind{TrajectoryKind::curtate};
  bool crunodes_expected{false};
  std::vector<double> critical_angles;  // theta = 2 n pi / (h - 1), n = 0 .. h-2
};

// Classifies the fundamental-plus-harmonic trajectory.  Throws on a harmonic
// order that is not an integer >= 2, or non-positive amplitudes.
inline std::pair<EpitrochoidParams, TrajectoryClass> classify(double v,
                                                              const HarmonicSpec& h) {
  if (v <= 0.0) throw std::invalid_argument("classify: fundamental amplitude must be positive");
  if (h.amplitude < 0.0) throw std::invalid_argument("classify: harmonic amplitude must be >= 0");
  const double rounded = std::round(h.order);
  if (std::abs(h.order - rounded) > 1e-9 || rounded < 2.0)
    throw std::invalid_argument("classify: harmonic order must be an integer >= 2");
  const auto order = static_cast<std::size_t>(rounded);

  EpitrochoidParams p;
  p.order = rounded;
  p.d = h.amplitude;
  p.r = v / rounded;
  p.R = v * (rounded - 1.0) / rounded;
  p.n_critical = order - 1;

  TrajectoryClass c;
  if (p.d < p.r)
    c.kind = TrajectoryKind::curtate;
  else if (p.d > p.r)
    c.kind = TrajectoryKind::prolate;
  else
    c.kind = TrajectoryKind::epicycloid;
  c.crunodes_expected = c.kind == TrajectoryKind::prolate;
  c.critical_angles.reserve(p.n_critical);
  for (std::size_t k = 0; k < p.n_critical; ++k)
    c.critical_angles.push_back(2.0 * std::numbers::pi * static_cast<double>(k) /
                                (rounded - 1.0));
  return {p, c};
}

namespace detail {

inline double orientation(const std::array<double, 2>& a, const std::array<double, 2>& b,
                          const std::array<double, 2>& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

inline bool proper_crossing(const std::array<double, 2>& p1, const std::array<double, 2>& p2,
                            const std::array<double, 2>& q1, const std::array<double, 2>& q2,
                            std::array<double, 2>& where) {
  const double o1 = orientation(p1, p2, q1);
  const double o2 = orientation(p1, p2, q2);
  const double o3 = orientation(q1, q2, p1);
  const double o4 = orientation(q1, q2, p2);
  if (!((o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0))) return false;
  const double t = o3 / (o3 - o4);  // parameter along p1->p2
  where = {p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1])};
  return true;
}

}  // namespace detail

// Self-intersection points of the closed polyline formed by one period of the
// (alpha, beta) trajectory.  Adjacent segments (sharing a vertex, including
// the closing segment) are excluded; coincident hits are de-duplicated.
inline std::vector<std::array<double, 2>> self_intersections(const UniformSeries& one_period) {
  check_uniform(one_period);
  if (one_period.channels.size() < 2)
    throw std::invalid_argument("self_intersections: need alpha and beta channels");
  const std::size_t n = one_period.size();
  if (n < 4) throw std::invalid_argument("self_intersections: need at least 4 samples");

  std::vector<std::array<double, 2>> pts(n);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = {one_period.channels[0].samples[i], one_period.channels[1].samples[i]};
    xmin = std::min(xmin, pts[i][0]);
    xmax = std::max(xmax, pts[i][0]);
    ymin = std::min(ymin, pts[i][1]);
    ymax = std::max(ymax, pts[i][1]);
  }
  const double dedupe_tol = 1e-9 * std::hypot(xmax - xmin, ymax - ymin);

  // Segment i runs pts[i] -> pts[(i+1) % n]; sort by left x for a sweep.
  struct Seg {
    std::size_t i;
    double lo, hi;
  };
  std::vector<Seg> segs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = pts[i];
    const auto& b = pts[(i + 1) % n];
    segs[i] = {i, std::min(a[0], b[0]), std::max(a[0], b[0])};
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.lo < b.lo; });

  std::vector<std::array<double, 2>> found;
  for (std::size_t si = 0; si < n; ++si) {
    for (std::size_t sj = si + 1; sj < n && segs[sj].lo <= segs[si].hi; ++sj) {
      const std::size_t i = segs[si].i;
      const std::size_t j = segs[sj].i;
      const std::size_t gap = i < j ? j - i : i - j;
      if (gap == 1 || gap == n - 1) continue;  // adjacent, shared vertex
      std::array<double, 2> where;
      if (!detail::proper_crossing(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n], where))
        continue;
      bool duplicate = false;
      for (const auto& p : found) {
        if (std::hypot(p[0] - where[0], p[1] - where[1]) <= dedupe_tol) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) found.push_back(where);
    }
  }
  return found;
}

inline bool detect_self_intersection(const UniformSeries& one_period) {
  return !self_intersections(one_period).empty();
}

}  // namespace qssf
