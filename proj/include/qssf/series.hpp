#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qssf/vec3.hpp"

namespace qssf {

// One named sample column of a series.
struct Channel {
  std::string name;
  std::vector<double> samples;
};

// Uniformly sampled multi-channel time series.  Sample i lives at
// t0 + i * dt; all channels share the same length and time base.
struct UniformSeries {
  double t0{0.0};
  double dt{0.0};
  std::vector<Channel> channels;

  std::size_t size() const { return channels.empty() ? 0 : channels.front().samples.size(); }

  double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }

  // Time spanned from the first to the last sample.
  double span() const { return size() < 2 ? 0.0 : dt * static_cast<double>(size() - 1); }

  // The first three channels interpreted as a vector sample.
  Vec3 vec_at(std::size_t i) const {
    return {channels[0].samples[i], channels[1].samples[i], channels[2].samples[i]};
  }

  const Channel* find_channel(const std::string& name) const {
    for (const auto& c : channels) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

// Builds an all-zero series with the given channel names.
inline UniformSeries make_series(double t0, double dt, std::vector<std::string> names,
                                 std::size_t n) {
  if (dt <= 0.0) throw std::invalid_argument("make_series: dt must be positive");
  UniformSeries s;
  s.t0 = t0;
  s.dt = dt;
  s.channels.reserve(names.size());
  for (auto& name : names) s.channels.push_back({std::move(name), std::vector<double>(n, 0.0)});
  return s;
}

// Throws std::invalid_argument unless the series has a positive dt and
// equal-length channels.
inline void check_uniform(const UniformSeries& s) {
  if (s.dt <= 0.0) throw std::invalid_argument("series: dt must be positive");
  if (s.channels.empty()) throw std::invalid_argument("series: no channels");
  const std::size_t n = s.channels.front().samples.size();
  for (const auto& c : s.channels) {
    if (c.samples.size() != n)
      throw std::invalid_argument("series: channel '" + c.name + "' length mismatch");
  }
}

}  // namespace qssf
