#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qssf/diffgeo.hpp"

namespace qssf {

enum class PeriodStatus {
  found,
  not_found,        // |w| integral did not reach 2*pi within the horizon
  invalid_samples,  // anchor unusable (invalid start sample or degenerate data)
};

// Geometric period estimate anchored at t_start: the smallest T such that the
// angular rate magnitude integrates to one full turn over [t_start, t_start+T].
struct PeriodEstimate {
  double t_start{0.0};
  double period{std::numeric_limits<double>::quiet_NaN()};
  double unwound{0.0};  // accumulated |w| integral at termination, rad
  PeriodStatus status{PeriodStatus::not_found};

  bool found() const { return status == PeriodStatus::found; }
};

namespace detail {

inline std::size_t next_valid(const OmegaTrace& tr, std::size_t i, std::size_t i_max) {
  while (i <= i_max && !tr.samples[i].valid) ++i;
  return i;  // > i_max when none
}

}  // namespace detail

// Detects the geometric period from the anchor sample `start`.  Integration
// is trapezoidal between valid samples; invalid samples (discontinuity
// stencils, magnitude floor) are bridged by linear interpolation between the
// valid samples that surround them.  The 2*pi crossing is located by linear
// interpolation inside the bracketing segment.
inline PeriodEstimate detect_period_at(const OmegaTrace& trace, std::size_t start,
                                       double horizon) {
  const std::size_t n = trace.size();
  if (start >= n) throw std::invalid_argument("detect_period: start index out of range");
  if (horizon <= 0.0) throw std::invalid_argument("detect_period: horizon must be positive");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  PeriodEstimate est;
  est.t_start = trace.time_at(start);

  if (!trace.samples[start].valid) {
    est.status = PeriodStatus::invalid_samples;
    return est;
  }

  const double t_limit = est.t_start + horizon;
  std::size_t i_max = n - 1;
  if (trace.time_at(i_max) > t_limit)
    i_max = start + static_cast<std::size_t>(std::floor((horizon / trace.dt) * (1.0 + 1e-12)));
  if (i_max >= n) i_max = n - 1;

  std::size_t prev = start;
  double accum = 0.0;
  for (;;) {
    const std::size_t cur = detail::next_valid(trace, prev + 1, i_max);
    if (cur > i_max) break;
    const double span = trace.dt * static_cast<double>(cur - prev);
    const double w_prev = trace.samples[prev].omega.norm();
    const double w_cur = trace.samples[cur].omega.norm();
    const double next_accum = accum + 0.5 * (w_prev + w_cur) * span;
    if (next_accum >= two_pi) {
      const double frac = (two_pi - accum) / (next_accum - accum);
      const double t_cross = trace.time_at(prev) + frac * span;
      est.period = t_cross - est.t_start;
      est.unwound = two_pi;
      // A full turn inside fewer than two sample intervals is numerical
      // garbage (spike), not a resolvable period.
      est.status = est.period >= 2.0 * trace.dt ? PeriodStatus::found
                                                : PeriodStatus::invalid_samples;
      return est;
    }
    accum = next_accum;
    prev = cur;
  }
  est.unwound = accum;
  est.status = PeriodStatus::not_found;
  return est;
}

// Same, anchored at the sample nearest to t_start.
inline PeriodEstimate detect_period(const OmegaTrace& trace, double t_start, double horizon) {
  if (trace.size() == 0) throw std::invalid_argument("detect_period: empty trace");
  const double pos = (t_start - trace.t0) / trace.dt;
  if (pos < -0.5 || pos > static_cast<double>(trace.size() - 1) + 0.5)
    throw std::invalid_argument("detect_period: t_start outside the trace");
  const auto idx = static_cast<std::size_t>(std::llround(std::max(0.0, pos)));
  return detect_period_at(trace, std::min(idx, trace.size() - 1), horizon);
}

struct PeriodTrackConfig {
  std::size_t stride{1};          // anchor spacing in samples
  double nominal_period{0.02};    // horizon seed before the first detection
  double horizon_factor{4.0};     // horizon = factor * latest known period
};

// Sliding-anchor period estimation.  The search horizon adapts to the most
// recent successful estimate.
inline std::vector<PeriodEstimate> period_track(const OmegaTrace& trace,
                                                const PeriodTrackConfig& cfg = {}) {
  if (cfg.stride == 0) throw std::invalid_argument("period_track: stride must be positive");
  if (cfg.nominal_period <= 0.0)
    throw std::invalid_argument("period_track: nominal_period must be positive");

  std::vector<PeriodEstimate> out;
  double reference = cfg.nominal_period;
  for (std::size_t s = 0; s < trace.size(); s += cfg.stride) {
    PeriodEstimate est = detect_period_at(trace, s, cfg.horizon_factor * reference);
    if (est.found()) reference = est.period;
    out.push_back(est);
  }
  return out;
}

}  // namespace qssf
