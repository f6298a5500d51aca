#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qssf/circulation.hpp"
#include "qssf/frames.hpp"
#include "qssf/synth.hpp"

using Catch::Approx;
using namespace qssf;

namespace {
constexpr double pi = std::numbers::pi;

UniformSeries alphabeta(const SignalSpec& spec, double span, double dt) {
  return clarke_series(synthesize(spec, span, dt));
}

PeriodEstimate manual_period(double t_start, double period) {
  PeriodEstimate est;
  est.t_start = t_start;
  est.period = period;
  est.unwound = 2.0 * pi;
  est.status = PeriodStatus::found;
  return est;
}
}  // namespace

TEST_CASE("a closed trajectory has zero circulation derivative") {
  const UniformSeries ab = alphabeta(preset_balanced(), 0.05, 1e-5);
  const OmegaTrace tr = omega_v(ab);
  const PeriodEstimate est = detect_period_at(tr, 0, 0.04);
  const CirculationVerdict v = gamma_prime(ab, est);
  REQUIRE(v.valid);
  REQUIRE(std::abs(v.gamma_prime) < 1e-8);
  REQUIRE(v.epsilon == Approx(epsilon_clean));
  REQUIRE(v.period_status == PeriodStatus::found);
}

TEST_CASE("a fractional-order harmonic breaks the closure condition") {
  // For h = 7.5 the trajectory does not close after one fundamental period:
  // |v(T)|^2 - |v(0)|^2 = -4 V Vh cos(phi_h) exactly.
  const double vh = 0.0583, phi = 210.0 * pi / 180.0;
  SignalSpec spec = preset_balanced();
  spec.harmonics = {{7.5, vh, phi}};
  const UniformSeries ab = alphabeta(spec, 0.05, 1e-5);

  const CirculationVerdict v = gamma_prime(ab, manual_period(0.0, 0.02));
  const double expected = -4.0 * vh * std::cos(phi);
  REQUIRE(expected == Approx(0.2019571241625311).epsilon(1e-12));
  REQUIRE(v.gamma_prime == Approx(expected).margin(1e-6));
  REQUIRE_FALSE(v.valid);  // 0.202 pu^2 exceeds the clean threshold 1e-2
}

TEST_CASE("endpoint difference agrees with the integral form") {
  const UniformSeries ab = alphabeta(preset_harmonic_vd(), 0.05, 1e-5);
  const OmegaTrace tr = omega_v(ab);
  const PeriodEstimate est = detect_period_at(tr, 0, 0.04);
  const CirculationVerdict v = gamma_prime(ab, est);
  const double integral = gamma_prime_integral(ab, est);
  REQUIRE(std::abs(v.gamma_prime - integral) < 1e-6);
}

TEST_CASE("missing period propagates without throwing") {
  const UniformSeries ab = alphabeta(preset_dc(), 0.1, 1e-4);
  PeriodEstimate est;
  est.t_start = 0.0;
  est.status = PeriodStatus::not_found;
  const CirculationVerdict v = gamma_prime(ab, est);
  REQUIRE_FALSE(v.valid);
  REQUIRE(std::isnan(v.gamma_prime));
  REQUIRE(v.period_status == PeriodStatus::not_found);
  REQUIRE(std::isnan(gamma_prime_integral(ab, est)));
}

TEST_CASE("a dip edge inside the window trips the gate") {
  SignalSpec spec = preset_balanced();
  spec.events.dips.push_back({0.02, 0.04, 0.8});
  const UniformSeries ab = alphabeta(spec, 0.06, 1e-5);
  // Window [0.01, 0.03] straddles the dip onset: |v| drops from 1 to 0.2.
  const CirculationVerdict v = gamma_prime(ab, manual_period(0.01, 0.02));
  REQUIRE(v.gamma_prime == Approx(0.04 - 1.0).margin(1e-9));
  REQUIRE_FALSE(v.valid);
}

TEST_CASE("validity_trace applies one verdict per estimate") {
  const UniformSeries ab = alphabeta(preset_balanced(), 0.1, 1e-4);
  const OmegaTrace tr = omega_v(ab);
  const std::vector<PeriodEstimate> track = period_track(tr, {100, 0.02, 4.0});
  const std::vector<CirculationVerdict> verdicts = validity_trace(ab, track, 1e-3);
  REQUIRE(verdicts.size() == track.size());
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    REQUIRE(verdicts[i].epsilon == Approx(1e-3));
    REQUIRE(verdicts[i].t == Approx(track[i].t_start));
    if (track[i].found()) REQUIRE(verdicts[i].valid);
  }
}

TEST_CASE("precondition failures throw") {
  const UniformSeries ab = alphabeta(preset_balanced(), 0.03, 1e-4);
  REQUIRE_THROWS_AS(gamma_prime(ab, manual_period(0.0, 0.02), 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(gamma_prime(ab, manual_period(0.02, 0.02)), std::invalid_argument);
  REQUIRE_THROWS_AS(gamma_prime_integral(ab, manual_period(0.02, 0.02)),
                    std::invalid_argument);
}
