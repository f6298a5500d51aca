#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "qssf/diffgeo.hpp"
#include "qssf/period.hpp"
#include "qssf/series.hpp"

namespace qssf {

// Default circulation thresholds (pu^2): clean synthetic data vs field
// measurements.
constexpr double epsilon_clean = 1e-2;
constexpr double epsilon_measured = 0.3;

// Outcome of the quasi-steady-state validity check at one anchor.  The
// estimate is meaningful only when the squared magnitude returns to its
// starting value after one geometric period.
struct CirculationVerdict {
  double t{0.0};
  double gamma_prime{std::numeric_limits<double>::quiet_NaN()};  // pu^2
  double epsilon{epsilon_clean};
  bool valid{false};
  PeriodStatus period_status{PeriodStatus::not_found};
};

namespace detail {

// |v(t)|^2 with linear interpolation between bracketing samples.
inline double squared_mag_at(const UniformSeries& s, double t) {
  const double pos = (t - s.t0) / s.dt;
  const std::size_t n = s.size();
  if (pos < -1e-9 || pos > static_cast<double>(n - 1) * (1.0 + 1e-12) + 1e-9)
    throw std::invalid_argument("circulation: time outside the series");
  const auto k = static_cast<std::size_t>(std::min(std::max(pos, 0.0),
                                                   static_cast<double>(n - 2)));
  const double frac = std::min(std::max(pos - static_cast<double>(k), 0.0), 1.0);
  const double q0 = s.vec_at(k).squared_norm();
  const double q1 = s.vec_at(k + 1).squared_norm();
  return q0 + frac * (q1 - q0);
}

}  // namespace detail

// Circulation derivative Gamma' = |v(t_start + T)|^2 - |v(t_start)|^2.  The
// verdict is valid iff |Gamma'| <= epsilon and the period search succeeded.
inline CirculationVerdict gamma_prime(const UniformSeries& s, const PeriodEstimate& est,
                                      double epsilon = epsilon_clean) {
  check_uniform(s);
  if (s.channels.size() < 3) throw std::invalid_argument("gamma_prime: need 3 vector channels");
  if (epsilon <= 0.0) throw std::invalid_argument("gamma_prime: epsilon must be positive");

  CirculationVerdict v;
  v.t = est.t_start;
  v.epsilon = epsilon;
  v.period_status = est.status;
  if (!est.found()) return v;

  const double q_start = detail::squared_mag_at(s, est.t_start);
  const double q_end = detail::squared_mag_at(s, est.t_start + est.period);
  v.gamma_prime = q_end - q_start;
  v.valid = std::abs(v.gamma_prime) <= epsilon;
  return v;
}

// Cross-check form: trapezoidal integral of d|v|^2/dt over the period window.
// Agrees with the endpoint difference to discretisation error on smooth data.
inline double gamma_prime_integral(const UniformSeries& s, const PeriodEstimate& est) {
  check_uniform(s);
  if (!est.found()) return std::numeric_limits<double>::quiet_NaN();

  const std::size_t n = s.size();
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = s.vec_at(i).squared_norm();
  const std::vector<double> dq = derivative(q, s.dt);

  const double pos_start = (est.t_start - s.t0) / s.dt;
  const auto start = static_cast<std::size_t>(std::llround(pos_start));
  const double t_end = est.t_start + est.period;
  const double pos_end = (t_end - s.t0) / s.dt;
  if (pos_end > static_cast<double>(n - 1) * (1.0 + 1e-12))
    throw std::invalid_argument("gamma_prime_integral: window extends past the series");
  auto last = static_cast<std::size_t>(pos_end);
  if (last >= n - 1) last = n - 2;

  double acc = 0.0;
  for (std::size_t i = start; i < last; ++i) acc += 0.5 * (dq[i] + dq[i + 1]) * s.dt;
  const double frac = pos_end - static_cast<double>(last);
  const double dq_end = dq[last] + frac * (dq[last + 1] - dq[last]);
  acc += 0.5 * (dq[last] + dq_end) * (frac * s.dt);
  return acc;
}

// Applies the circulation check to a sequence of period estimates.
inline std::vector<CirculationVerdict> validity_trace(const UniformSeries& s,
                                                      std::span<const PeriodEstimate> periods,
                                                      double epsilon = epsilon_clean) {
  std::vector<CirculationVerdict> out;
  out.reserve(periods.size());
  for (const auto& p : periods) out.push_back(gamma_prime(s, p, epsilon));
  return out;
}

}  // namespace qssf
