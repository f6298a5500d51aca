#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qssf/series.hpp"
#include "qssf/synth.hpp"

namespace qssf {

enum class Frame { abc, alphabeta };

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(trim(s.substr(pos)));
      return out;
    }
    out.push_back(trim(s.substr(pos, next - pos)));
    pos = next + 1;
  }
}

inline double parse_double(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw std::runtime_error("csv: line " + std::to_string(line_no) + ": bad number '" +
                             std::string(field) + "'");
  return value;
}

inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

// Reads a voltage CSV.  Accepted headers:
//   t,va,vb,vc                 (three-phase quantities)
//   t,valpha,vbeta[,vgamma]    (stationary-frame vector; gamma defaults to 0)
// The time column must be uniform; dt is inferred from it.  When `expected`
// is set, a mismatching header is rejected.
inline UniformSeries read_csv(std::istream& in, std::optional<Frame> expected = std::nullopt) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  const auto header = detail::split(line, ',');

  Frame frame;
  bool has_gamma = true;
  if (header.size() == 4 && header[0] == "t" && header[1] == "va" && header[2] == "vb" &&
      header[3] == "vc") {
    frame = Frame::abc;
  } else if (header.size() >= 3 && header.size() <= 4 && header[0] == "t" &&
             header[1] == "valpha" && header[2] == "vbeta" &&
             (header.size() == 3 || header[3] == "vgamma")) {
    frame = Frame::alphabeta;
    has_gamma = header.size() == 4;
  } else {
    throw std::runtime_error("csv: unrecognised header '" + line + "'");
  }
  if (expected && *expected != frame)
    throw std::runtime_error("csv: header does not match the requested frame");

  std::vector<double> t;
  std::vector<std::vector<double>> cols(3);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split(trimmed, ',');
    if (fields.size() != header.size())
      throw std::runtime_error("csv: line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields");
    t.push_back(detail::parse_double(fields[0], line_no));
    for (std::size_t c = 0; c < 3; ++c) {
      const double v = c + 1 < fields.size() ? detail::parse_double(fields[c + 1], line_no) : 0.0;
      if (!std::isfinite(v))
        throw std::runtime_error("csv: line " + std::to_string(line_no) + ": non-finite value");
      cols[c].push_back(v);
    }
  }
  const std::size_t n = t.size();
  if (n < 2) throw std::runtime_error("csv: need at least 2 sample rows");

  const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
  if (dt <= 0.0) throw std::runtime_error("csv: time column must be strictly increasing");
  for (std::size_t i = 1; i < n; ++i) {
    const double step = t[i] - t[i - 1];
    if (std::abs(step - dt) > 1e-3 * dt)
      throw std::runtime_error("csv: non-uniform sampling near row " + std::to_string(i + 1));
  }

  UniformSeries s;
  s.t0 = t.front();
  s.dt = dt;
  if (frame == Frame::abc) {
    s.channels = {{"va", std::move(cols[0])},
                  {"vb", std::move(cols[1])},
                  {"vc", std::move(cols[2])}};
  } else {
    if (!has_gamma) cols[2].assign(n, 0.0);
    s.channels = {{"valpha", std::move(cols[0])},
                  {"vbeta", std::move(cols[1])},
                  {"vgamma", std::move(cols[2])}};
  }
  return s;
}

inline UniformSeries read_csv(const std::string& path,
                              std::optional<Frame> expected = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
  return read_csv(in, expected);
}

// Writes a series as CSV with a time column followed by every channel.
// Numbers use the shortest representation that round-trips exactly.
inline void write_series_csv(const UniformSeries& s, std::ostream& out) {
  check_uniform(s);
  out << "t";
  for (const auto& c : s.channels) out << ',' << c.name;
  out << '\n';
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    out << detail::format_double(s.time_at(i));
    for (const auto& c : s.channels) out << ',' << detail::format_double(c.samples[i]);
    out << '\n';
  }
}

inline void write_series_csv(const UniformSeries& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  write_series_csv(s, out);
}

// One output row of the estimation pipeline.  Optional fields are written as
// empty cells.
struct EstimateRecord {
  double t{0.0};
  double f_inst_hz{0.0};
  std::optional<double> f_pll_hz;
  std::optional<double> f_qss_hz;
  std::optional<double> period_s;
  std::optional<double> gamma_prime;
  bool valid{false};
};

inline void write_estimates(const std::vector<EstimateRecord>& records, std::ostream& out) {
  out << "t,f_inst_hz,f_pll_hz,f_qss_hz,period_s,gamma_prime,valid\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? detail::format_double(*v) : std::string();
  };
  for (const auto& r : records) {
    out << detail::format_double(r.t) << ',' << detail::format_double(r.f_inst_hz) << ','
        << cell(r.f_pll_hz) << ',' << cell(r.f_qss_hz) << ',' << cell(r.period_s) << ','
        << cell(r.gamma_prime) << ',' << (r.valid ? '1' : '0') << '\n';
  }
}

inline void write_estimates(const std::vector<EstimateRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  write_estimates(records, out);
}

inline std::vector<EstimateRecord> read_estimates(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      detail::trim(line) != "t,f_inst_hz,f_pll_hz,f_qss_hz,period_s,gamma_prime,valid")
    throw std::runtime_error("csv: not an estimate file");
  std::vector<EstimateRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split(trimmed, ',');
    if (fields.size() != 7)
      throw std::runtime_error("csv: line " + std::to_string(line_no) + ": expected 7 fields");
    auto opt = [&](std::string_view f) -> std::optional<double> {
      if (f.empty()) return std::nullopt;
      return detail::parse_double(f, line_no);
    };
    EstimateRecord r;
    r.t = detail::parse_double(fields[0], line_no);
    r.f_inst_hz = detail::parse_double(fields[1], line_no);
    r.f_pll_hz = opt(fields[2]);
    r.f_qss_hz = opt(fields[3]);
    r.period_s = opt(fields[4]);
    r.gamma_prime = opt(fields[5]);
    if (fields[6] != "0" && fields[6] != "1")
      throw std::runtime_error("csv: line " + std::to_string(line_no) + ": valid must be 0 or 1");
    r.valid = fields[6] == "1";
    out.push_back(r);
  }
  return out;
}

inline std::vector<EstimateRecord> read_estimates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
  return read_estimates(in);
}

// ---- Generator spec documents ---------------------------------------------
//
// Flat key = value text, `#` starts a comment.  Tuple values are separated by
// whitespace.  Keys:
//   preset      balanced | unbalanced-1.5 | harmonic-vd | crunode-h7 | dc
//   v           fundamental amplitude, pu
//   f_hz        fundamental frequency, Hz
//   phase_deg   fundamental phase, degrees
//   unbalance   V_alpha / V_beta ratio
//   harmonic    <order> <amplitude_pu> <phase_deg>      (repeatable)
//   dc          <alpha> <beta> <gamma>
//   noise_std   per-channel noise standard deviation, pu
//   dip         <t_begin> <t_end> <depth>               (repeatable)
//   phase_jump  <t_begin> <t_end> <angle_deg>           (repeatable)
//   ramp        <t_begin> <t_end> <rate_hz_per_s>       (repeatable)
//   span        generated span, s
//   dt          sample step, s
//   seed        noise seed
// A preset line resets the signal description, so place it first.

struct SynthDocument {
  SignalSpec spec;
  std::optional<double> span;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
};

inline SignalSpec preset_by_name(std::string_view name) {
  if (name == "balanced") return preset_balanced();
  if (name == "unbalanced-1.5") return preset_unbalanced_15();
  if (name == "harmonic-vd") return preset_harmonic_vd();
  if (name == "crunode-h7") return preset_crunode_h7();
  if (name == "dc") return preset_dc();
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

inline SynthDocument parse_spec_document(std::istream& in) {
  constexpr double pi = 3.14159265358979323846;
  constexpr double deg = pi / 180.0;
  SynthDocument doc;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos)
      throw std::runtime_error("spec: line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = detail::trim(body.substr(0, eq));
    const std::string_view value = detail::trim(body.substr(eq + 1));

    if (key == "preset") {
      doc.spec = preset_by_name(value);
      continue;
    }
    std::vector<double> nums;
    {
      std::istringstream vs{std::string(value)};
      std::string tok;
      while (vs >> tok) nums.push_back(detail::parse_double(tok, line_no));
    }
    auto want = [&](std::size_t n) {
      if (nums.size() != n)
        throw std::runtime_error("spec: line " + std::to_string(line_no) + ": key '" +
                                 std::string(key) + "' takes " + std::to_string(n) + " value(s)");
    };

    if (key == "v") {
      want(1);
      doc.spec.amplitude = nums[0];
    } else if (key == "f_hz") {
      want(1);
      doc.spec.omega = 2.0 * pi * nums[0];
    } else if (key == "phase_deg") {
      want(1);
      doc.spec.phase = nums[0] * deg;
    } else if (key == "unbalance") {
      want(1);
      doc.spec.unbalance = nums[0];
    } else if (key == "harmonic") {
      want(3);
      doc.spec.harmonics.push_back({nums[0], nums[1], nums[2] * deg});
    } else if (key == "dc") {
      want(3);
      doc.spec.dc = true;
      doc.spec.dc_level = {nums[0], nums[1], nums[2]};
    } else if (key == "noise_std") {
      want(1);
      doc.spec.noise_std = nums[0];
    } else if (key == "dip") {
      want(3);
      doc.spec.events.dips.push_back({nums[0], nums[1], nums[2]});
    } else if (key == "phase_jump") {
      want(3);
      doc.spec.events.jumps.push_back({nums[0], nums[1], nums[2] * deg});
    } else if (key == "ramp") {
      want(3);
      doc.spec.events.ramps.push_back({nums[0], nums[1], nums[2]});
    } else if (key == "span") {
      want(1);
      doc.span = nums[0];
    } else if (key == "dt") {
      want(1);
      doc.dt = nums[0];
    } else if (key == "seed") {
      want(1);
      doc.seed = static_cast<std::uint64_t>(nums[0]);
    } else {
      throw std::runtime_error("spec: line " + std::to_string(line_no) + ": unknown key '" +
                               std::string(key) + "'");
    }
  }
  return doc;
}

inline SynthDocument parse_spec_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("spec: cannot open '" + path + "'");
  return parse_spec_document(in);
}

}  // namespace qssf
