#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qssf/circulation.hpp"
#include "qssf/diffgeo.hpp"
#include "qssf/period.hpp"
#include "qssf/pll.hpp"
#include "qssf/series.hpp"

namespace qssf {

enum class QssMethod {
  vector_average,  // (1/T) * integral of the angular-rate vector
  static_frame,    // |w| = 2*pi / T, valid in stationary frames
};

// Quasi-steady-state frequency over one geometric period anchored at t.
struct QssEstimate {
  double t{0.0};
  Vec3 omega{};       // rad/s
  double f_hz{0.0};   // |omega| / (2*pi)
  double period{0.0};
  QssMethod method{QssMethod::vector_average};
};

namespace detail {

// Integral of the angular-rate vector over [t_start, t_start + T] with the
// same bridged trapezoidal rule used by the period detector.
inline Vec3 integrate_omega(const OmegaTrace& trace, const PeriodEstimate& est) {
  const std::size_t n = trace.size();
  const double pos = (est.t_start - trace.t0) / trace.dt;
  const auto start = static_cast<std::size_t>(std::llround(std::max(0.0, pos)));
  if (start >= n) throw std::invalid_argument("qss: anchor outside the trace");
  const double t_end = est.t_start + est.period;

  std::size_t prev = start;
  while (prev < n && !trace.samples[prev].valid) ++prev;
  if (prev >= n || trace.time_at(prev) >= t_end)
    throw std::invalid_argument("qss: no valid samples inside the period window");

  Vec3 acc{};
  for (;;) {
    std::size_t cur = prev + 1;
    while (cur < n && !trace.samples[cur].valid) ++cur;
    if (cur >= n) throw std::invalid_argument("qss: period window not covered by the trace");
    const Vec3 w_prev = trace.samples[prev].omega;
    const Vec3 w_cur = trace.samples[cur].omega;
    const double t_prev = trace.time_at(prev);
    const double t_cur = trace.time_at(cur);
    if (t_cur >= t_end) {
      const double frac = (t_end - t_prev) / (t_cur - t_prev);
      const Vec3 w_end = w_prev + (w_cur - w_prev) * frac;
      acc += (w_prev + w_end) * (0.5 * (t_end - t_prev));
      return acc;
    }
    acc += (w_prev + w_cur) * (0.5 * (t_cur - t_prev));
    prev = cur;
  }
}

}  // namespace detail

// Vector-average QSS frequency: w_qss = (1/T) * closed-loop integral of w.
// Returns nothing when the period search did not succeed.
inline std::optional<QssEstimate> qss_vector(const OmegaTrace& trace,
                                             const PeriodEstimate& est) {
  if (!est.found()) return std::nullopt;
  QssEstimate q;
  q.t = est.t_start;
  q.period = est.period;
  q.method = QssMethod::vector_average;
  q.omega = detail::integrate_omega(trace, est) / est.period;
  q.f_hz = q.omega.norm() / (2.0 * std::numbers::pi);
  return q;
}

// Static-frame shortcut: one full turn per period, so |w_qss| = 2*pi / T.
// The rotation axis is not resolved; the magnitude is reported on the
// gamma axis (the stationary-frame rotation axis of planar trajectories).
inline std::optional<QssEstimate> qss_static(const PeriodEstimate& est) {
  if (!est.found()) return std::nullopt;
  QssEstimate q;
  q.t = est.t_start;
  q.period = est.period;
  q.method = QssMethod::static_frame;
  q.omega = {0.0, 0.0, 2.0 * std::numbers::pi / est.period};
  q.f_hz = 1.0 / est.period;
  return q;
}

struct PipelineConfig {
  std::size_t stride{10};            // anchor spacing in samples
  double nominal_freq_hz{50.0};      // horizon seed before the first detection
  double horizon_factor{4.0};
  double epsilon{epsilon_clean};     // circulation threshold, pu^2
  QssMethod method{QssMethod::vector_average};
  DiffGeoOptions geometry{};
  double omega_lp_cutoff_hz{0.0};    // smooth the angular-rate trace; 0 = off
};

// Everything the pipeline knows at one anchor.
struct AnchorResult {
  double t{0.0};
  double f_inst_hz{0.0};   // |w(t)| / (2*pi) at the anchor sample
  PeriodEstimate period;
  std::optional<QssEstimate> qss;
  CirculationVerdict verdict;
};

namespace detail {

// Fills invalid samples by linear interpolation between valid neighbours
// (nearest valid value at the ends), then low-passes each component.
inline void smooth_omega(OmegaTrace& trace, double cutoff_hz) {
  const std::size_t n = trace.size();
  std::vector<double> comp(n);
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3& w = trace.samples[i].omega;
      comp[i] = axis == 0 ? w.x : axis == 1 ? w.y : w.z;
    }
    std::size_t i = 0;
    while (i < n) {
      if (trace.samples[i].valid) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < n && !trace.samples[j].valid) ++j;
      const bool has_left = i > 0, has_right = j < n;
      for (std::size_t k = i; k < j; ++k) {
        if (has_left && has_right) {
          const double frac = static_cast<double>(k - (i - 1)) / static_cast<double>(j - (i - 1));
          comp[k] = comp[i - 1] + frac * (comp[j] - comp[i - 1]);
        } else if (has_left) {
          comp[k] = comp[i - 1];
        } else if (has_right) {
          comp[k] = comp[j];
        }
      }
      i = j;
    }
    comp = first_order_lowpass(comp, trace.dt, cutoff_hz);
    for (std::size_t k = 0; k < n; ++k) {
      Vec3& w = trace.samples[k].omega;
      (axis == 0 ? w.x : axis == 1 ? w.y : w.z) = comp[k];
    }
  }
}

}  // namespace detail

// Full QSS pipeline over an alpha-beta-gamma series: angular rate, sliding
// period detection, QSS averaging, and the circulation validity gate.
inline std::vector<AnchorResult> analyze(const UniformSeries& alphabeta,
                                         const PipelineConfig& cfg = {}) {
  if (cfg.stride == 0) throw std::invalid_argument("analyze: stride must be positive");
  if (cfg.nominal_freq_hz <= 0.0)
    throw std::invalid_argument("analyze: nominal frequency must be positive");

  OmegaTrace trace = omega_v(alphabeta, cfg.geometry);
  if (cfg.omega_lp_cutoff_hz > 0.0) detail::smooth_omega(trace, cfg.omega_lp_cutoff_hz);

  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<AnchorResult> out;
  double reference = 1.0 / cfg.nominal_freq_hz;
  // Anchors too close to the end of the data cannot fit one nominal period;
  // they would be reported not_found regardless of the signal, so stop there.
  const double t_cut = trace.time_at(trace.size() - 1) + 0.5 * trace.dt -
                       1.0 / cfg.nominal_freq_hz;
  // With smoothing enabled, the causal filter needs a few time constants to
  // forget its seed value; anchors inside that warm-up window inherit the
  // transient, so skip them.
  const double t_warm = cfg.omega_lp_cutoff_hz > 0.0
                            ? trace.t0 + 3.0 / (two_pi * cfg.omega_lp_cutoff_hz)
                            : trace.t0;
  for (std::size_t s = 0; s < trace.size(); s += cfg.stride) {
    if (trace.time_at(s) > t_cut) break;
    if (trace.time_at(s) < t_warm - 0.5 * trace.dt) continue;
    AnchorResult r;
    r.t = trace.time_at(s);
    r.f_inst_hz = trace.samples[s].omega.norm() / two_pi;
    r.period = detect_period_at(trace, s, cfg.horizon_factor * reference);
    if (r.period.found()) {
      reference = r.period.period;
      r.qss = cfg.method == QssMethod::vector_average ? qss_vector(trace, r.period)
                                                      : qss_static(r.period);
    }
    r.verdict = gamma_prime(alphabeta, r.period, cfg.epsilon);
    out.push_back(std::move(r));
  }
  return out;
}

// Sliding QSS estimation: one (estimate, verdict) pair per anchor where a
// period was found.
inline std::vector<std::pair<QssEstimate, CirculationVerdict>> qss_stream(
    const UniformSeries& alphabeta, std::size_t stride, const PipelineConfig& base = {}) {
  PipelineConfig cfg = base;
  cfg.stride = stride;
  std::vector<std::pair<QssEstimate, CirculationVerdict>> out;
  for (auto& r : analyze(alphabeta, cfg)) {
    if (r.qss) out.emplace_back(*r.qss, r.verdict);
  }
  return out;
}

}  // namespace qssf
