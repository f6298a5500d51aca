#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qssf/series.hpp"

namespace qssf {

// Synchronous-reference-frame PLL tuned for a 50 Hz grid: kp/ki give a
// damping ratio of ~0.707 with a ~65 rad/s natural frequency.
struct PllConfig {
  double kp{92.0};
  double ki{4240.0};
  double f_nominal_hz{50.0};
  double lp_cutoff_hz{50.0};  // output low-pass; 0 disables
  double v_floor{1e-6};       // below this |v| the loop coasts
};

// First-order low-pass (bilinear transform), -3 dB exactly at cutoff_hz.
inline std::vector<double> first_order_lowpass(const std::vector<double>& x, double dt,
                                               double cutoff_hz) {
  if (dt <= 0.0) throw std::invalid_argument("lowpass: dt must be positive");
  if (cutoff_hz <= 0.0 || cutoff_hz >= 0.5 / dt)
    throw std::invalid_argument("lowpass: cutoff must lie in (0, Nyquist)");
  if (x.empty()) return {};

  const double k = std::tan(std::numbers::pi * cutoff_hz * dt);
  const double b = k / (1.0 + k);
  const double a = (1.0 - k) / (1.0 + k);
  std::vector<double> y(x.size());
  y[0] = x[0];
  for (std::size_t i = 1; i < x.size(); ++i) y[i] = b * (x[i] + x[i - 1]) + a * y[i - 1];
  return y;
}

// Low-passes every channel of a series.
inline UniformSeries lowpass(const UniformSeries& s, double cutoff_hz) {
  check_uniform(s);
  UniformSeries out = s;
  for (auto& c : out.channels) c.samples = first_order_lowpass(c.samples, s.dt, cutoff_hz);
  return out;
}

// Tracks the frequency of an alpha-beta(-gamma) series with an SRF-PLL.
// Returns a single-channel series named f_pll_hz.
inline UniformSeries pll_track(const UniformSeries& alphabeta, const PllConfig& cfg = {}) {
  check_uniform(alphabeta);
  if (alphabeta.channels.size() < 2)
    throw std::invalid_argument("pll_track: need alpha and beta channels");
  const std::size_t n = alphabeta.size();
  if (n < 2) throw std::invalid_argument("pll_track: need at least 2 samples");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double dt = alphabeta.dt;
  const double omega_nominal = two_pi * cfg.f_nominal_hz;
  const auto& va = alphabeta.channels[0].samples;
  const auto& vb = alphabeta.channels[1].samples;

  UniformSeries out = make_series(alphabeta.t0, dt, {"f_pll_hz"}, n);
  auto& f = out.channels[0].samples;

  double theta = std::atan2(vb[0], va[0]);
  double integrator = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::hypot(va[i], vb[i]);
    double vq = 0.0;  // loop coasts through near-zero magnitude
    if (mag >= cfg.v_floor) vq = (-std::sin(theta) * va[i] + std::cos(theta) * vb[i]) / mag;
    integrator += cfg.ki * vq * dt;
    const double omega = omega_nominal + cfg.kp * vq + integrator;
    theta = std::remainder(theta + omega * dt, two_pi);
    f[i] = omega / two_pi;
  }

  if (cfg.lp_cutoff_hz > 0.0)
    f = first_order_lowpass(f, dt, cfg.lp_cutoff_hz);
  return out;
}

}  // namespace qssf
