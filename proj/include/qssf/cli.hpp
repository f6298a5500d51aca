#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qssf/epitrochoid.hpp"
#include "qssf/frames.hpp"
#include "qssf/io.hpp"
#include "qssf/pll.hpp"
#include "qssf/qss.hpp"
#include "qssf/synth.hpp"

namespace qssf {
namespace cli_detail {

struct EstimatorSet {
  bool qss{true};
  bool pll{true};
  QssMethod method{QssMethod::vector_average};
};

inline EstimatorSet parse_estimators(const std::string& list) {
  EstimatorSet set;
  set.qss = false;
  set.pll = false;
  bool vector_requested = false, static_requested = false;
  for (auto tok : detail::split(list, ',')) {
    if (tok == "qss" || tok == "qss_vector") {
      set.qss = true;
      vector_requested = true;
    } else if (tok == "qss_static") {
      set.qss = true;
      static_requested = true;
      set.method = QssMethod::static_frame;
    } else if (tok == "pll") {
      set.pll = true;
    } else if (!tok.empty()) {
      throw std::invalid_argument("unknown estimator '" + std::string(tok) + "'");
    }
  }
  if (vector_requested && static_requested)
    throw std::invalid_argument("choose one of qss_vector / qss_static");
  if (!set.qss && !set.pll) throw std::invalid_argument("no estimator selected");
  return set;
}

inline std::optional<Frame> parse_frame(const std::string& name) {
  if (name == "auto") return std::nullopt;
  if (name == "abc") return Frame::abc;
  if (name == "alphabeta") return Frame::alphabeta;
  throw std::invalid_argument("unknown frame '" + name + "' (use abc, alphabeta or auto)");
}

struct LoadedInput {
  UniformSeries alphabeta;
  double vbase{1.0};
};

// Reads a voltage CSV, maps it to the stationary frame and normalises it to
// per-unit by vbase (default: the largest vector magnitude in the file).
inline LoadedInput load_input(const std::string& path, const std::optional<Frame>& frame,
                              double dt_override, double vbase_flag) {
  UniformSeries s = read_csv(path, frame);
  if (dt_override > 0.0) s.dt = dt_override;
  if (s.channels.front().name == "va") s = clarke_series(s);

  double vbase = vbase_flag;
  if (vbase <= 0.0) {
    for (std::size_t i = 0; i < s.size(); ++i) vbase = std::max(vbase, s.vec_at(i).norm());
    if (vbase <= 0.0) throw std::runtime_error("input signal is identically zero");
  }
  for (auto& c : s.channels) {
    for (auto& x : c.samples) x /= vbase;
  }
  return {std::move(s), vbase};
}

// Resolves the generator description from --preset / --input, with explicit
// command-line span/dt/seed taking precedence over the document.
struct SynthArgs {
  std::string preset;
  std::string spec_path;
  double span{1.0};
  double dt{1e-4};
  std::uint64_t seed{0};
  bool span_set{false}, dt_set{false}, seed_set{false};
};

inline SynthDocument resolve_synth(const SynthArgs& a) {
  if (!a.preset.empty() && !a.spec_path.empty())
    throw std::invalid_argument("use either --preset or --input, not both");
  SynthDocument doc;
  if (!a.spec_path.empty())
    doc = parse_spec_document(a.spec_path);
  else if (!a.preset.empty())
    doc.spec = preset_by_name(a.preset);
  else
    doc.spec = preset_balanced();
  if (a.span_set || !doc.span) doc.span = a.span;
  if (a.dt_set || !doc.dt) doc.dt = a.dt;
  if (a.seed_set || !doc.seed) doc.seed = a.seed;
  return doc;
}

inline void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Quasi-steady-state frequency estimation for three-phase voltages"};
  app.require_subcommand(1);

  // --- synth ---------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a three-phase test signal CSV");
  cli_detail::SynthArgs sa;
  std::string synth_output;
  synth->add_option("--preset", sa.preset,
                    "balanced | unbalanced-1.5 | harmonic-vd | crunode-h7 | dc");
  synth->add_option("--input", sa.spec_path, "generator spec document");
  auto* opt_span = synth->add_option("--span", sa.span, "generated span, s [1.0]");
  auto* opt_dt = synth->add_option("--dt", sa.dt, "sample step, s [1e-4]");
  auto* opt_seed = synth->add_option("--seed", sa.seed, "noise seed [0]");
  synth->add_option("--output", synth_output, "output CSV path (- for stdout)")->required();

  // --- estimate --------------------------------------------------------------
  auto* est = app.add_subcommand("estimate", "Estimate frequency from a voltage CSV");
  std::string est_input, est_output = "-", est_frame = "auto", est_estimators = "qss,pll";
  double est_dt = 0.0, est_epsilon = epsilon_clean, est_vfloor = 1e-6, est_vbase = 0.0;
  double est_fnominal = 50.0;
  std::size_t est_stride = 10;
  est->add_option("--input", est_input, "voltage CSV")->required();
  est->add_option("--output", est_output, "estimate CSV path (- for stdout)");
  est->add_option("--frame", est_frame, "abc | alphabeta | auto [auto]");
  est->add_option("--dt", est_dt, "override the sample step, s");
  est->add_option("--stride", est_stride, "anchor spacing in samples [10]");
  est->add_option("--epsilon", est_epsilon, "circulation threshold, pu^2 [0.01]");
  est->add_option("--vfloor", est_vfloor, "magnitude floor, pu [1e-6]");
  est->add_option("--vbase", est_vbase, "per-unit base (default: max |v| in the file)");
  est->add_option("--fnominal", est_fnominal, "nominal frequency, Hz [50]");
  est->add_option("--estimators", est_estimators, "comma list: qss|qss_static,pll [qss,pll]");

  // --- classify --------------------------------------------------------------
  auto* cls = app.add_subcommand("classify", "Classify a fundamental-plus-harmonic trajectory");
  cli_detail::SynthArgs ca;
  ca.dt = 1e-5;
  std::string cls_output;
  cls->add_option("--preset", ca.preset, "named preset (e.g. crunode-h7)");
  cls->add_option("--input", ca.spec_path, "generator spec document");
  auto* copt_dt = cls->add_option("--dt", ca.dt, "sampling step for the numeric check [1e-5]");
  cls->add_option("--output", cls_output, "write the report here instead of stdout");

  // --- validate --------------------------------------------------------------
  auto* val = app.add_subcommand("validate", "Recompute the circulation validity gate");
  std::string val_input, val_output, val_frame = "auto";
  double val_dt = 0.0, val_epsilon = epsilon_clean, val_vfloor = 1e-6, val_vbase = 0.0;
  double val_fnominal = 50.0;
  std::size_t val_stride = 10;
  val->add_option("--input", val_input, "voltage CSV")->required();
  val->add_option("--output", val_output, "optional per-anchor CSV");
  val->add_option("--frame", val_frame, "abc | alphabeta | auto [auto]");
  val->add_option("--dt", val_dt, "override the sample step, s");
  val->add_option("--stride", val_stride, "anchor spacing in samples [10]");
  val->add_option("--epsilon", val_epsilon, "circulation threshold, pu^2 [0.01]");
  val->add_option("--vfloor", val_vfloor, "magnitude floor, pu [1e-6]");
  val->add_option("--vbase", val_vbase, "per-unit base (default: max |v| in the file)");
  val->add_option("--fnominal", val_fnominal, "nominal frequency, Hz [50]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) {
      sa.span_set = opt_span->count() > 0;
      sa.dt_set = opt_dt->count() > 0;
      sa.seed_set = opt_seed->count() > 0;
      const SynthDocument doc = cli_detail::resolve_synth(sa);
      const UniformSeries s = synthesize(doc.spec, *doc.span, *doc.dt, *doc.seed);
      if (synth_output == "-") {
        write_series_csv(s, std::cout);
      } else {
        write_series_csv(s, synth_output);
      }
      return 0;
    }

    if (est->parsed()) {
      const auto estimators = cli_detail::parse_estimators(est_estimators);
      const auto input = cli_detail::load_input(est_input, cli_detail::parse_frame(est_frame),
                                                est_dt, est_vbase);
      PipelineConfig cfg;
      cfg.stride = est_stride;
      cfg.nominal_freq_hz = est_fnominal;
      cfg.epsilon = est_epsilon;
      cfg.geometry.v_floor = est_vfloor;
      cfg.method = estimators.method;
      const auto anchors = analyze(input.alphabeta, cfg);

      UniformSeries pll_series;
      if (estimators.pll) {
        PllConfig pc;
        pc.f_nominal_hz = est_fnominal;
        pc.v_floor = est_vfloor;
        pll_series = pll_track(input.alphabeta, pc);
      }

      std::vector<EstimateRecord> records;
      records.reserve(anchors.size());
      for (std::size_t k = 0; k < anchors.size(); ++k) {
        const AnchorResult& a = anchors[k];
        EstimateRecord r;
        r.t = a.t;
        r.f_inst_hz = a.f_inst_hz;
        if (estimators.pll) r.f_pll_hz = pll_series.channels[0].samples[k * est_stride];
        if (estimators.qss && a.qss) r.f_qss_hz = a.qss->f_hz;
        if (a.period.found()) {
          r.period_s = a.period.period;
          r.gamma_prime = a.verdict.gamma_prime;
        }
        r.valid = a.verdict.valid;
        records.push_back(r);
      }
      if (est_output == "-") {
        write_estimates(records, std::cout);
      } else {
        write_estimates(records, est_output);
      }
      return 0;
    }

    if (cls->parsed()) {
      ca.dt_set = copt_dt->count() > 0;
      const SynthDocument doc = cli_detail::resolve_synth(ca);
      if (doc.spec.dc || doc.spec.harmonics.size() != 1)
        throw std::invalid_argument(
            "classification needs a fundamental plus exactly one harmonic");
      const auto [params, cls_result] = classify(doc.spec.amplitude, doc.spec.harmonics[0]);

      // Numeric cross-check: synthesise one fundamental period and count the
      // crossings of the alpha-beta trajectory.
      const double period = 2.0 * std::numbers::pi / doc.spec.omega;
      const UniformSeries one = clarke_series(synthesize(doc.spec, period, *doc.dt));
      const auto crossings = self_intersections(one);

      std::ostringstream out;
      out << "order = " << detail::format_double(params.order) << '\n'
          << "d = " << detail::format_double(params.d) << '\n'
          << "r = " << detail::format_double(params.r) << '\n'
          << "R = " << detail::format_double(params.R) << '\n';
      const char* kind = cls_result.kind == TrajectoryKind::curtate      ? "curtate"
                         : cls_result.kind == TrajectoryKind::epicycloid ? "epicycloid"
                                                                         : "prolate";
      out << "kind = " << kind << '\n'
          << "crunodes_expected = " << (cls_result.crunodes_expected ? 1 : 0) << '\n'
          << "n_critical = " << params.n_critical << '\n';
      out << "critical_angles_rad =";
      for (double a : cls_result.critical_angles) out << ' ' << detail::format_double(a);
      out << '\n';
      out << "crossings_detected = " << crossings.size() << '\n';
      cli_detail::write_text(out.str(), cls_output);
      return 0;
    }

    if (val->parsed()) {
      const auto input = cli_detail::load_input(val_input, cli_detail::parse_frame(val_frame),
                                                val_dt, val_vbase);
      PipelineConfig cfg;
      cfg.stride = val_stride;
      cfg.nominal_freq_hz = val_fnominal;
      cfg.epsilon = val_epsilon;
      cfg.geometry.v_floor = val_vfloor;
      const auto anchors = analyze(input.alphabeta, cfg);

      std::size_t valid = 0;
      std::vector<EstimateRecord> records;
      records.reserve(anchors.size());
      for (const AnchorResult& a : anchors) {
        if (a.verdict.valid) ++valid;
        EstimateRecord r;
        r.t = a.t;
        r.f_inst_hz = a.f_inst_hz;
        if (a.period.found()) {
          r.period_s = a.period.period;
          r.gamma_prime = a.verdict.gamma_prime;
        }
        r.valid = a.verdict.valid;
        records.push_back(r);
      }
      if (!val_output.empty()) write_estimates(records, val_output);

      std::ostringstream out;
      out << "anchors = " << anchors.size() << '\n'
          << "valid = " << valid << '\n'
          << "fraction = "
          << detail::format_double(anchors.empty()
                                       ? 0.0
                                       : static_cast<double>(valid) /
                                             static_cast<double>(anchors.size()))
          << '\n'
          << "epsilon = " << detail::format_double(val_epsilon) << '\n';
      std::cout << out.str();
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace qssf
