#pragma once

#include <cmath>
#include <stdexcept>

#include "qssf/series.hpp"
#include "qssf/vec3.hpp"

namespace qssf {

// One instantaneous three-phase sample.
struct ThreePhaseFrame {
  double va{0.0};
  double vb{0.0};
  double vc{0.0};
};

// Voltage vector in the stationary alpha-beta-gamma frame.
struct AlphaBetaVector {
  double alpha{0.0};
  double beta{0.0};
  double gamma{0.0};

  Vec3 vec() const { return {alpha, beta, gamma}; }
  double magnitude() const { return vec().norm(); }
};

// Amplitude-invariant Clarke transform: a balanced set of phase amplitude V
// maps to a vector of constant magnitude V rotating in the alpha-beta plane.
inline AlphaBetaVector clarke(const ThreePhaseFrame& f) {
  constexpr double inv_sqrt3 = 0.57735026918962576451;
  AlphaBetaVector v;
  v.alpha = (2.0 / 3.0) * (f.va - 0.5 * f.vb - 0.5 * f.vc);
  v.beta = inv_sqrt3 * (f.vb - f.vc);
  v.gamma = (f.va + f.vb + f.vc) / 3.0;
  return v;
}

// Transforms a three-channel phase series (va, vb, vc) into the
// (valpha, vbeta, vgamma) frame, sample by sample.
inline UniformSeries clarke_series(const UniformSeries& abc) {
  check_uniform(abc);
  if (abc.channels.size() != 3)
    throw std::invalid_argument("clarke_series: expected exactly 3 phase channels");

  const std::size_t n = abc.size();
  UniformSeries out = make_series(abc.t0, abc.dt, {"valpha", "vbeta", "vgamma"}, n);
  const auto& a = abc.channels[0].samples;
  const auto& b = abc.channels[1].samples;
  const auto& c = abc.channels[2].samples;
  for (std::size_t i = 0; i < n; ++i) {
    const AlphaBetaVector v = clarke({a[i], b[i], c[i]});
    out.channels[0].samples[i] = v.alpha;
    out.channels[1].samples[i] = v.beta;
    out.channels[2].samples[i] = v.gamma;
  }
  return out;
}

}  // namespace qssf
