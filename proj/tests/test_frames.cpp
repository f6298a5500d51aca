#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qssf/frames.hpp"

using Catch::Approx;
using namespace qssf;

namespace {
constexpr double pi = std::numbers::pi;

ThreePhaseFrame balanced_frame(double v, double theta) {
  return {v * std::cos(theta), v * std::cos(theta - 2.0 * pi / 3.0),
          v * std::cos(theta + 2.0 * pi / 3.0)};
}
}  // namespace

TEST_CASE("clarke maps a balanced set to a circle of the phase amplitude") {
  const double v = 1.3;
  for (double theta = 0.0; theta < 2.0 * pi; theta += 0.113) {
    const AlphaBetaVector u = clarke(balanced_frame(v, theta));
    REQUIRE(u.alpha == Approx(v * std::cos(theta)).margin(1e-12));
    REQUIRE(u.beta == Approx(v * std::sin(theta)).margin(1e-12));
    REQUIRE(u.gamma == Approx(0.0).margin(1e-12));
    REQUIRE(u.magnitude() == Approx(v).margin(1e-12));
  }
}

TEST_CASE("clarke isolates the zero-sequence component") {
  const AlphaBetaVector u = clarke({0.7, 0.7, 0.7});
  REQUIRE(u.alpha == Approx(0.0).margin(1e-15));
  REQUIRE(u.beta == Approx(0.0).margin(1e-15));
  REQUIRE(u.gamma == Approx(0.7));
}

TEST_CASE("clarke is linear") {
  const ThreePhaseFrame f{0.3, -1.1, 0.9};
  const AlphaBetaVector u = clarke(f);
  const AlphaBetaVector u2 = clarke({2.0 * f.va, 2.0 * f.vb, 2.0 * f.vc});
  REQUIRE(u2.alpha == Approx(2.0 * u.alpha));
  REQUIRE(u2.beta == Approx(2.0 * u.beta));
  REQUIRE(u2.gamma == Approx(2.0 * u.gamma));
}

TEST_CASE("clarke_series transforms sample by sample") {
  const double v = 0.95, omega = 2.0 * pi * 50.0;
  UniformSeries abc = make_series(0.0, 1e-4, {"va", "vb", "vc"}, 64);
  for (std::size_t i = 0; i < abc.size(); ++i) {
    const ThreePhaseFrame f = balanced_frame(v, omega * abc.time_at(i));
    abc.channels[0].samples[i] = f.va;
    abc.channels[1].samples[i] = f.vb;
    abc.channels[2].samples[i] = f.vc;
  }
  const UniformSeries ab = clarke_series(abc);
  REQUIRE(ab.channels.size() == 3);
  REQUIRE(ab.channels[0].name == "valpha");
  REQUIRE(ab.channels[2].name == "vgamma");
  REQUIRE(ab.dt == Approx(abc.dt));
  for (std::size_t i = 0; i < ab.size(); ++i) {
    REQUIRE(ab.vec_at(i).norm() == Approx(v).margin(1e-12));
    REQUIRE(ab.channels[2].samples[i] == Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("clarke_series rejects non-three-phase input") {
  REQUIRE_THROWS_AS(clarke_series(make_series(0.0, 1e-4, {"va", "vb"}, 8)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(clarke_series(make_series(0.0, 1e-4, {"a", "b", "c", "d"}, 8)),
                    std::invalid_argument);
}
