#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qssf/frames.hpp"
#include "qssf/synth.hpp"

using Catch::Approx;
using namespace qssf;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double w50 = 2.0 * pi * 50.0;
}  // namespace

TEST_CASE("balanced generator traces a circle of constant magnitude") {
  const UniformSeries abc = synth_balanced(1.2, w50, 0.3, 0.05, 1e-4);
  REQUIRE(abc.size() == 500);
  REQUIRE(abc.channels.size() == 3);
  const UniformSeries ab = clarke_series(abc);
  for (std::size_t i = 0; i < ab.size(); ++i) {
    REQUIRE(ab.vec_at(i).norm() == Approx(1.2).margin(1e-12));
    const double theta = w50 * ab.time_at(i) + 0.3;
    REQUIRE(ab.channels[0].samples[i] == Approx(1.2 * std::cos(theta)).margin(1e-12));
  }
}

TEST_CASE("unbalanced generator sets the alpha-beta amplitude ratio") {
  const UniformSeries ab = clarke_series(synth_unbalanced(1.5, 1.5, w50, 0.0, 0.04, 1e-5));
  double amax = 0.0, bmax = 0.0;
  for (std::size_t i = 0; i < ab.size(); ++i) {
    amax = std::max(amax, std::abs(ab.channels[0].samples[i]));
    bmax = std::max(bmax, std::abs(ab.channels[1].samples[i]));
  }
  REQUIRE(amax == Approx(1.5).epsilon(1e-6));
  REQUIRE(bmax == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("harmonic generator matches the closed-form squared magnitude") {
  const double v = 1.0, vh = 0.0583, h = 7.0, phi = 210.0 * pi / 180.0;
  const UniformSeries ab = clarke_series(synth_harmonic(v, w50, 0.0, {{h, vh, phi}}, 0.02, 1e-5));
  for (std::size_t i = 0; i < ab.size(); ++i) {
    const double t = ab.time_at(i);
    const double expected =
        v * v + vh * vh + 2.0 * v * vh * std::cos((h - 1.0) * w50 * t + phi);
    REQUIRE(ab.vec_at(i).squared_norm() == Approx(expected).margin(1e-12));
  }
}

TEST_CASE("dc generator holds the requested stationary vector") {
  const UniformSeries ab = clarke_series(synth_dc({0.4, -0.2, 0.1}, 0.01, 1e-4));
  for (std::size_t i = 0; i < ab.size(); ++i) {
    const Vec3 u = ab.vec_at(i);
    REQUIRE(u.x == Approx(0.4).margin(1e-12));
    REQUIRE(u.y == Approx(-0.2).margin(1e-12));
    REQUIRE(u.z == Approx(0.1).margin(1e-12));
  }
}

TEST_CASE("dip scales the vector inside the window only") {
  SignalSpec spec = preset_balanced();
  spec.events.dips.push_back({0.02, 0.04, 0.8});
  const UniformSeries ab = clarke_series(synthesize(spec, 0.06, 1e-4));
  for (std::size_t i = 0; i < ab.size(); ++i) {
    const double t = ab.time_at(i);
    const double expected = (t >= 0.02 && t < 0.04) ? 0.2 : 1.0;
    REQUIRE(ab.vec_at(i).norm() == Approx(expected).margin(1e-12));
  }
}

TEST_CASE("phase jump rotates the trajectory by the requested angle") {
  SignalSpec spec = preset_balanced();
  const double angle = 30.0 * pi / 180.0;
  spec.events.jumps.push_back({0.03, 0.06, angle});
  const UniformSeries ab = clarke_series(synthesize(spec, 0.06, 1e-4));
  for (std::size_t i = 0; i < ab.size(); ++i) {
    const double t = ab.time_at(i);
    const double theta = w50 * t + (t >= 0.03 ? angle : 0.0);
    REQUIRE(ab.channels[0].samples[i] == Approx(std::cos(theta)).margin(1e-12));
    REQUIRE(ab.channels[1].samples[i] == Approx(std::sin(theta)).margin(1e-12));
  }
}

TEST_CASE("ramp holds the final frequency after the window") {
  SignalSpec spec = preset_balanced();
  spec.events.ramps.push_back({0.1, 0.3, 10.0});  // 50 -> 52 Hz
  const double dt = 1e-5;
  const UniformSeries ab = clarke_series(synthesize(spec, 0.5, dt));
  auto phase_at = [&](std::size_t i) {
    return std::atan2(ab.channels[1].samples[i], ab.channels[0].samples[i]);
  };
  // Instantaneous frequency from the phase increment over one step.
  auto freq_at = [&](std::size_t i) {
    return std::remainder(phase_at(i + 1) - phase_at(i), 2.0 * pi) / (2.0 * pi * dt);
  };
  REQUIRE(freq_at(5000) == Approx(50.0).margin(1e-3));    // before
  REQUIRE(freq_at(20000) == Approx(51.0).margin(1e-2));   // mid-window
  REQUIRE(freq_at(45000) == Approx(52.0).margin(1e-3));   // held afterwards
}

TEST_CASE("apply_events matches generation-time events for balanced input") {
  SignalSpec spec = preset_balanced();
  spec.events.dips.push_back({0.02, 0.03, 0.5});
  const UniformSeries direct = synthesize(spec, 0.05, 1e-4);

  const UniformSeries base = synth_balanced(1.0, w50, 0.0, 0.05, 1e-4);
  EventSet ev;
  ev.dips.push_back({0.02, 0.03, 0.5});
  const UniformSeries post = apply_events(base, ev);

  for (std::size_t i = 0; i < direct.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      REQUIRE(post.channels[c].samples[i] ==
              Approx(direct.channels[c].samples[i]).margin(1e-12));
    }
  }
}

TEST_CASE("event validation") {
  SignalSpec spec = preset_balanced();
  spec.events.dips.push_back({0.05, 0.02, 0.5});  // begin after end
  REQUIRE_THROWS_AS(synthesize(spec, 0.1, 1e-4), std::invalid_argument);

  spec.events.dips = {{0.02, 0.2, 0.5}};  // beyond the span
  REQUIRE_THROWS_AS(synthesize(spec, 0.1, 1e-4), std::invalid_argument);

  spec.events.dips = {{0.02, 0.04, 1.5}};  // bad depth
  REQUIRE_THROWS_AS(synthesize(spec, 0.1, 1e-4), std::invalid_argument);

  spec.events.dips = {{0.02, 0.05, 0.5}};
  spec.events.jumps = {{0.04, 0.06, 0.1}};  // overlaps the dip
  REQUIRE_THROWS_AS(synthesize(spec, 0.1, 1e-4), std::invalid_argument);

  REQUIRE_THROWS_AS(synth_balanced(1.0, w50, 0.0, 1e-5, 1e-4), std::invalid_argument);
  REQUIRE_THROWS_AS(synth_balanced(1.0, w50, 0.0, 0.1, -1e-4), std::invalid_argument);
}

TEST_CASE("noise is deterministic under a fixed seed") {
  SignalSpec spec = preset_balanced();
  spec.noise_std = 0.02;
  const UniformSeries a = synthesize(spec, 0.02, 1e-4, 42);
  const UniformSeries b = synthesize(spec, 0.02, 1e-4, 42);
  const UniformSeries c = synthesize(spec, 0.02, 1e-4, 43);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a.channels[0].samples[i] == b.channels[0].samples[i]);
    differs = differs || a.channels[0].samples[i] != c.channels[0].samples[i];
  }
  REQUIRE(differs);

  const UniformSeries base = synth_balanced(1.0, w50, 0.0, 0.02, 1e-4);
  const UniformSeries n1 = add_noise(base, 0.01, 7);
  const UniformSeries n2 = add_noise(base, 0.01, 7);
  REQUIRE(n1.channels[1].samples == n2.channels[1].samples);
  REQUIRE_THROWS_AS(add_noise(base, -0.1, 7), std::invalid_argument);
}

TEST_CASE("presets carry the documented parameters") {
  REQUIRE(preset_balanced().amplitude == Approx(1.0));
  REQUIRE(preset_unbalanced_15().unbalance == Approx(1.5));
  const SignalSpec vd = preset_harmonic_vd();
  REQUIRE(vd.harmonics.size() == 2);
  REQUIRE(vd.harmonics[0].order == Approx(7.0));
  REQUIRE(vd.harmonics[0].amplitude == Approx(0.0583));
  REQUIRE(vd.harmonics[1].order == Approx(11.0));
  REQUIRE(vd.harmonics[1].amplitude == Approx(0.0371));
  REQUIRE(preset_crunode_h7().harmonics[0].amplitude == Approx(0.5583));
  REQUIRE(preset_dc().dc);
}
