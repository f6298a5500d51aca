#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "qssf/frames.hpp"
#include "qssf/series.hpp"
#include "qssf/vec3.hpp"

namespace qssf {

// One harmonic component riding on the fundamental.  `order` is kept as a
// double so malformed (non-integer) orders can be diagnosed downstream.
struct HarmonicSpec {
  double order{0.0};
  double amplitude{0.0};  // pu
  double phase{0.0};      // rad
};

// Voltage dip: all channels scaled by (1 - depth) inside the window.
struct DipEvent {
  double t_begin{0.0};
  double t_end{0.0};
  double depth{0.0};  // 0 = no dip, 1 = full interruption
};

// Phase jump: the alpha-beta projection is rotated by `angle` inside the
// window.  A lasting step is modelled by a window that reaches the end of
// the span.
struct PhaseJumpEvent {
  double t_begin{0.0};
  double t_end{0.0};
  double angle{0.0};  // rad
};

// Frequency ramp: frequency increases linearly by `rate_hz_s` inside the
// window and holds the final value afterwards.
struct RampEvent {
  double t_begin{0.0};
  double t_end{0.0};
  double rate_hz_s{0.0};
};

struct EventSet {
  std::vector<DipEvent> dips;
  std::vector<PhaseJumpEvent> jumps;
  std::vector<RampEvent> ramps;

  bool empty() const { return dips.empty() && jumps.empty() && ramps.empty(); }
};

// Full description of a synthetic three-phase signal.  The base trajectory is
//   v_alpha = V cos(w t + phi) + sum_h Vh cos(h w t + phi_h)
//   v_beta  = V/ratio sin(w t + phi) + sum_h Vh sin(h w t + phi_h)
// with ratio = 1 for balanced sets, then mapped to phase quantities.
struct SignalSpec {
  double amplitude{1.0};                     // V, pu (alpha-axis amplitude)
  double omega{2.0 * std::numbers::pi * 50.0};  // rad/s
  double phase{0.0};                         // rad
  double unbalance{1.0};                     // V_alpha / V_beta
  std::vector<HarmonicSpec> harmonics;
  bool dc{false};
  Vec3 dc_level{};                           // used when dc == true
  EventSet events;
  double noise_std{0.0};                     // pu, per phase channel
};

namespace detail {

inline std::size_t sample_count(double span, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("synth: dt must be positive");
  if (span < 2.0 * dt) throw std::invalid_argument("synth: span must cover at least 2 samples");
  return static_cast<std::size_t>(std::llround(span / dt));
}

// Inverse of the amplitude-invariant Clarke transform.
inline ThreePhaseFrame inverse_clarke(const AlphaBetaVector& v) {
  constexpr double half_sqrt3 = 0.86602540378443864676;
  ThreePhaseFrame f;
  f.va = v.alpha + v.gamma;
  f.vb = -0.5 * v.alpha + half_sqrt3 * v.beta + v.gamma;
  f.vc = -0.5 * v.alpha - half_sqrt3 * v.beta + v.gamma;
  return f;
}

inline void check_window(double t_begin, double t_end, double span, const char* what) {
  if (!(t_begin >= 0.0) || !(t_end > t_begin) || !(t_end <= span))
    throw std::invalid_argument(std::string("synth: ") + what +
                                " window must satisfy 0 <= begin < end <= span");
}

inline void check_events(const EventSet& ev, double span) {
  std::vector<std::pair<double, double>> windows;
  for (const auto& d : ev.dips) {
    check_window(d.t_begin, d.t_end, span, "dip");
    if (d.depth < 0.0 || d.depth > 1.0)
      throw std::invalid_argument("synth: dip depth must lie in [0, 1]");
    windows.emplace_back(d.t_begin, d.t_end);
  }
  for (const auto& j : ev.jumps) {
    check_window(j.t_begin, j.t_end, span, "phase jump");
    windows.emplace_back(j.t_begin, j.t_end);
  }
  for (const auto& r : ev.ramps) {
    check_window(r.t_begin, r.t_end, span, "ramp");
    windows.emplace_back(r.t_begin, r.t_end);
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (std::size_t j = i + 1; j < windows.size(); ++j) {
      if (windows[i].first < windows[j].second && windows[j].first < windows[i].second)
        throw std::invalid_argument("synth: event windows must not overlap");
    }
  }
}

// Extra rotation angle contributed by phase-jump and ramp events at time t.
inline double event_rotation(const EventSet& ev, double t) {
  double delta = 0.0;
  for (const auto& j : ev.jumps) {
    if (t >= j.t_begin && t < j.t_end) delta += j.angle;
  }
  for (const auto& r : ev.ramps) {
    constexpr double pi = std::numbers::pi;
    if (t >= r.t_begin && t < r.t_end) {
      const double u = t - r.t_begin;
      delta += pi * r.rate_hz_s * u * u;
    } else if (t >= r.t_end) {
      const double w = r.t_end - r.t_begin;
      delta += pi * r.rate_hz_s * w * w + 2.0 * pi * r.rate_hz_s * w * (t - r.t_end);
    }
  }
  return delta;
}

inline double event_scale(const EventSet& ev, double t) {
  double scale = 1.0;
  for (const auto& d : ev.dips) {
    if (t >= d.t_begin && t < d.t_end) scale *= 1.0 - d.depth;
  }
  return scale;
}

}  // namespace detail

// Generates the three-phase series described by `spec` over [0, span), one
// sample every dt.  Channels are named va, vb, vc.  Events and noise included.
inline UniformSeries synthesize(const SignalSpec& spec, double span, double dt,
                                std::uint64_t seed = 0) {
  const std::size_t n = detail::sample_count(span, dt);
  detail::check_events(spec.events, span);
  if (spec.unbalance <= 0.0) throw std::invalid_argument("synth: unbalance ratio must be positive");
  if (spec.noise_std < 0.0) throw std::invalid_argument("synth: noise_std must be non-negative");

  UniformSeries out = make_series(0.0, dt, {"va", "vb", "vc"}, n);
  const double v_alpha_amp = spec.amplitude;
  const double v_beta_amp = spec.amplitude / spec.unbalance;

  for (std::size_t i = 0; i < n; ++i) {
    const double t = out.time_at(i);
    AlphaBetaVector v;
    if (spec.dc) {
      v.alpha = spec.dc_level.x;
      v.beta = spec.dc_level.y;
      v.gamma = spec.dc_level.z;
    } else {
      const double theta = spec.omega * t + spec.phase;
      v.alpha = v_alpha_amp * std::cos(theta);
      v.beta = v_beta_amp * std::sin(theta);
      for (const auto& h : spec.harmonics) {
        const double th = h.order * spec.omega * t + h.phase;
        v.alpha += h.amplitude * std::cos(th);
        v.beta += h.amplitude * std::sin(th);
      }
    }
    const double rot = detail::event_rotation(spec.events, t);
    if (rot != 0.0) {
      const double c = std::cos(rot), s = std::sin(rot);
      const double a = v.alpha, b = v.beta;
      v.alpha = c * a - s * b;
      v.beta = s * a + c * b;
    }
    const double scale = detail::event_scale(spec.events, t);
    const ThreePhaseFrame f = detail::inverse_clarke({v.alpha * scale, v.beta * scale,
                                                      v.gamma * scale});
    out.channels[0].samples[i] = f.va;
    out.channels[1].samples[i] = f.vb;
    out.channels[2].samples[i] = f.vc;
  }

  if (spec.noise_std > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, spec.noise_std);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& c : out.channels) c.samples[i] += dist(rng);
    }
  }
  return out;
}

inline UniformSeries synth_balanced(double v, double omega, double phase, double span, double dt) {
  SignalSpec spec;
  spec.amplitude = v;
  spec.omega = omega;
  spec.phase = phase;
  return synthesize(spec, span, dt);
}

// `ratio` is V_alpha / V_beta; `v` sets the alpha-axis amplitude.
inline UniformSeries synth_unbalanced(double v, double ratio, double omega, double phase,
                                      double span, double dt) {
  SignalSpec spec;
  spec.amplitude = v;
  spec.omega = omega;
  spec.phase = phase;
  spec.unbalance = ratio;
  return synthesize(spec, span, dt);
}

inline UniformSeries synth_harmonic(double v, double omega, double phase,
                                    const std::vector<HarmonicSpec>& harmonics, double span,
                                    double dt) {
  SignalSpec spec;
  spec.amplitude = v;
  spec.omega = omega;
  spec.phase = phase;
  spec.harmonics = harmonics;
  return synthesize(spec, span, dt);
}

// Constant voltage vector given in the alpha-beta-gamma frame.
inline UniformSeries synth_dc(const Vec3& level, double span, double dt) {
  SignalSpec spec;
  spec.dc = true;
  spec.dc_level = level;
  return synthesize(spec, span, dt);
}

// Applies dip / phase jump / ramp events to an existing phase series.  The
// rotation acts on the alpha-beta projection, so for balanced sets it is
// exactly a phase shift of every channel.
inline UniformSeries apply_events(const UniformSeries& abc, const EventSet& events) {
  check_uniform(abc);
  if (abc.channels.size() != 3)
    throw std::invalid_argument("apply_events: expected 3 phase channels");
  detail::check_events(events, abc.span() + abc.dt);

  UniformSeries out = abc;
  const std::size_t n = abc.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = abc.time_at(i);
    AlphaBetaVector v = clarke({abc.channels[0].samples[i], abc.channels[1].samples[i],
                                abc.channels[2].samples[i]});
    const double rot = detail::event_rotation(events, t);
    if (rot != 0.0) {
      const double c = std::cos(rot), s = std::sin(rot);
      const double a = v.alpha, b = v.beta;
      v.alpha = c * a - s * b;
      v.beta = s * a + c * b;
    }
    const double scale = detail::event_scale(events, t);
    const ThreePhaseFrame f = detail::inverse_clarke({v.alpha * scale, v.beta * scale,
                                                      v.gamma * scale});
    out.channels[0].samples[i] = f.va;
    out.channels[1].samples[i] = f.vb;
    out.channels[2].samples[i] = f.vc;
  }
  return out;
}

// Adds white Gaussian noise (standard deviation `noise_std`) to every channel.
// Identical seed and build give identical output.
inline UniformSeries add_noise(const UniformSeries& s, double noise_std, std::uint64_t seed) {
  check_uniform(s);
  if (noise_std < 0.0) throw std::invalid_argument("add_noise: noise_std must be non-negative");
  UniformSeries out = s;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, noise_std);
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : out.channels) c.samples[i] += dist(rng);
  }
  return out;
}

// ---- Named presets -------------------------------------------------------

inline SignalSpec preset_balanced() {
  SignalSpec s;
  s.amplitude = 1.0;
  return s;
}

inline SignalSpec preset_unbalanced_15() {
  SignalSpec s;
  s.amplitude = 1.0;
  s.unbalance = 1.5;
  return s;
}

// Two positive-sequence harmonics typical of a six-pulse load.
inline SignalSpec preset_harmonic_vd() {
  constexpr double deg = std::numbers::pi / 180.0;
  SignalSpec s;
  s.amplitude = 1.0;
  s.harmonics = {{7.0, 0.0583, 210.0 * deg}, {11.0, 0.0371, 330.0 * deg}};
  return s;
}

// Single deep 7th harmonic whose trajectory develops crunodes.
inline SignalSpec preset_crunode_h7() {
  constexpr double deg = std::numbers::pi / 180.0;
  SignalSpec s;
  s.amplitude = 1.0;
  s.harmonics = {{7.0, 0.5583, 210.0 * deg}};
  return s;
}

inline SignalSpec preset_dc() {
  SignalSpec s;
  s.dc = true;
  s.dc_level = {1.0, 0.0, 0.0};
  return s;
}

}  // namespace qssf
