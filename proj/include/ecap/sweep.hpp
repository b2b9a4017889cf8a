/*
   Copyright 2026 The ecap authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecap/closed_form.hpp"
#include "ecap/monte_carlo.hpp"

namespace ecap {

// dB inputs are converted exactly once, at this layer; the math modules
// below only ever see linear values.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

enum class SweepAxis { xi0_db, theta };

struct OutputSet {
  bool closed = true;
  bool mc_exact = false;
  bool mc_approx = false;
};

// Parameters held fixed along a sweep; whichever of theta / xi0_db matches
// the axis is ignored in favor of the grid value.
struct SweepFixed {
  LinkConfig link;
  double zeta_db = 10.0;
  double theta = 0.01;
  double xi0_db = 10.0;
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::xi0_db;
  std::vector<double> grid;
  SweepFixed fixed;
  OutputSet outputs;
};

// One CSV record; absent outputs stay empty in the file.
struct SweepRow {
  std::string curve_label;
  double axis_value = 0.0;
  std::optional<double> closed_form;
  std::optional<double> mc_value;
  std::optional<double> mc_stderr;
};

inline constexpr const char* kSweepCsvHeader =
    "curve_label,axis_value,closed_form,mc_value,mc_stderr";

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void append_row(std::vector<SweepRow>& rows, const std::string& label,
                       double axis_value, std::optional<double> closed,
                       const std::optional<McEstimate>& mc, double norm) {
  SweepRow row;
  row.curve_label = label;
  row.axis_value = axis_value;
  row.closed_form = closed;
  if (mc) {
    row.mc_value = mc->value / norm;
    row.mc_stderr = mc->std_error / norm;
  }
  rows.push_back(std::move(row));
}

}  // namespace detail

/* Evaluate one curve of normalized effective capacity over a grid.
 * When both MC models are requested, each grid point yields one row per
 * model, labels suffixed "_exact" / "_approx".
 */
inline std::vector<SweepRow> run_sweep(const std::string& label, const SweepSpec& spec,
                                       const McConfig& mc) {
  if (spec.grid.empty()) throw std::invalid_argument("SweepSpec: empty grid");
  for (std::size_t i = 1; i < spec.grid.size(); ++i)
    if (!(spec.grid[i] > spec.grid[i - 1]))
      throw std::invalid_argument("SweepSpec: grid must be strictly increasing");

  const bool both_mc = spec.outputs.mc_exact && spec.outputs.mc_approx;
  std::vector<SweepRow> rows;
  for (double axis_value : spec.grid) {
    const double theta =
        spec.axis == SweepAxis::theta ? axis_value : spec.fixed.theta;
    const double xi0_db =
        spec.axis == SweepAxis::xi0_db ? axis_value : spec.fixed.xi0_db;
    const InterferenceSpec ispec =
        make_interference(db_to_linear(xi0_db), db_to_linear(spec.fixed.zeta_db));
    const double norm = spec.fixed.link.bandwidth_hz * spec.fixed.link.frame_s;

    std::optional<double> closed;
    if (spec.outputs.closed)
      closed = normalized_effective_capacity(ispec, spec.fixed.link, theta);

    if (!spec.outputs.mc_exact && !spec.outputs.mc_approx) {
      detail::append_row(rows, label, axis_value, closed, std::nullopt, norm);
      continue;
    }
    if (spec.outputs.mc_exact) {
      const McEstimate est = mc_effective_capacity(ispec, spec.fixed.link, theta,
                                                   mc, SinrModel::exact);
      detail::append_row(rows, both_mc ? label + "_exact" : label, axis_value,
                         closed, est, norm);
    }
    if (spec.outputs.mc_approx) {
      const McEstimate est = mc_effective_capacity(ispec, spec.fixed.link, theta,
                                                   mc, SinrModel::approx);
      detail::append_row(rows, both_mc ? label + "_approx" : label, axis_value,
                         closed, est, norm);
    }
  }
  return rows;
}

enum class FigureId { fig2, fig3, fig4, fig5, fig6, fig7, fig8 };

inline std::optional<FigureId> parse_figure_id(const std::string& s) {
  if (s == "fig2") return FigureId::fig2;
  if (s == "fig3") return FigureId::fig3;
  if (s == "fig4") return FigureId::fig4;
  if (s == "fig5") return FigureId::fig5;
  if (s == "fig6") return FigureId::fig6;
  if (s == "fig7") return FigureId::fig7;
  if (s == "fig8") return FigureId::fig8;
  return std::nullopt;
}

struct FigureOptions {
  long long trials = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  std::optional<OutputSet> outputs;  // default: closed + exact-model MC
  int tx_antennas = 0;               // fig6 variant select; 0 = preset default
};

namespace detail {

inline std::vector<double> xi0_db_grid() {
  std::vector<double> g;
  for (int db = -5; db <= 30; ++db) g.push_back(db);
  return g;
}

inline std::vector<double> theta_log_grid() {
  std::vector<double> g;
  for (int i = 0; i < 25; ++i) g.push_back(std::pow(10.0, -4.0 + 4.0 * i / 24.0));
  return g;
}

// CDF comparison preset: empirical vs moment-fit Gamma for unequal
// interferer powers.
inline std::vector<SweepRow> weighted_gamma_figure(const FigureOptions& opts) {
  const std::vector<std::vector<double>> weight_sets = {
      {1.0, 4.0}, {1.0, 2.0, 4.0}, {0.5, 1.0, 2.0, 4.0}};
  std::vector<SweepRow> rows;
  for (const auto& weights : weight_sets) {
    McConfig mc;
    mc.trials = opts.trials;
    mc.seed = opts.seed;
    const EmpiricalCdf emp = mc_weighted_gamma_cdf(weights, mc);
    const GammaFit fit = fit_gamma_moments(weights);
    const std::string label = "K=" + std::to_string(weights.size());
    for (std::size_t i = 0; i < emp.grid.size(); ++i) {
      SweepRow row;
      row.curve_label = label;
      row.axis_value = emp.grid[i];
      row.closed_form = gamma_cdf(emp.grid[i], fit);
      row.mc_value = emp.cdf[i];
      row.mc_stderr =
          std::sqrt(emp.cdf[i] * (1.0 - emp.cdf[i]) / static_cast<double>(mc.trials));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace detail

/* Preset sweeps. All share B = 100 kHz, T_f = 1 ms, R_c = 1 and a
 * 1 dB-step [-5, 30] dB signal-to-interference grid unless noted:
 *   fig2  weighted interference sum: empirical vs fitted Gamma CDF
 *   fig3/4/5  2x4 link, theta = 0.01, K in {2,5,10}; INR 0 / 10 / 20 dB
 *   fig6  INR 10 dB, K = 10, theta = 0.01, receive branches N in {1..4}
 *   fig7  2x4 selection vs 2x1, theta in {0.1, 0.01, 0.001}, INR 10 dB, K = 10
 *   fig8  theta axis (25 log-spaced points in [1e-4, 1]), SIR 10 dB,
 *         INR 10 dB, K in {5, 10, 20}
 */
inline std::vector<SweepRow> figure_rows(FigureId id, const FigureOptions& opts) {
  if (id == FigureId::fig2) return detail::weighted_gamma_figure(opts);

  McConfig mc;
  mc.trials = opts.trials;
  mc.seed = opts.seed;
  mc.threads = opts.threads;
  const OutputSet outputs = opts.outputs.value_or(OutputSet{true, true, false});

  SweepSpec spec;
  spec.outputs = outputs;
  spec.fixed.link = LinkConfig{};  // 2x4, K=10, Rc=1, 100 kHz, 1 ms
  std::vector<SweepRow> rows;

  auto sweep_k_curves = [&](double zeta_db, std::initializer_list<int> ks) {
    spec.axis = SweepAxis::xi0_db;
    spec.grid = detail::xi0_db_grid();
    spec.fixed.zeta_db = zeta_db;
    spec.fixed.theta = 0.01;
    for (int k : ks) {
      spec.fixed.link.interferers = k;
      auto part = run_sweep("K=" + std::to_string(k), spec, mc);
      rows.insert(rows.end(), part.begin(), part.end());
    }
  };

  switch (id) {
    case FigureId::fig3:
      sweep_k_curves(0.0, {2, 5, 10});
      break;
    case FigureId::fig4:
      sweep_k_curves(10.0, {2, 5, 10});
      break;
    case FigureId::fig5:
      sweep_k_curves(20.0, {2, 5, 10});
      break;
    case FigureId::fig6: {
      spec.axis = SweepAxis::xi0_db;
      spec.grid = detail::xi0_db_grid();
      spec.fixed.link.tx_antennas = opts.tx_antennas > 0 ? opts.tx_antennas : 2;
      for (int n : {1, 2, 3, 4}) {
        spec.fixed.link.rx_antennas = n;
        auto part = run_sweep("N=" + std::to_string(n), spec, mc);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      break;
    }
    case FigureId::fig7: {
      spec.axis = SweepAxis::xi0_db;
      spec.grid = detail::xi0_db_grid();
      for (double theta : {0.1, 0.01, 0.001}) {
        spec.fixed.theta = theta;
        for (int n : {4, 1}) {
          spec.fixed.link.rx_antennas = n;
          const std::string label = (n == 4 ? "ras_theta=" : "miso_theta=") +
                                    detail::format_double(theta);
          auto part = run_sweep(label, spec, mc);
          rows.insert(rows.end(), part.begin(), part.end());
        }
      }
      break;
    }
    case FigureId::fig8: {
      spec.axis = SweepAxis::theta;
      spec.grid = detail::theta_log_grid();
      spec.fixed.xi0_db = 10.0;
      for (int k : {5, 10, 20}) {
        spec.fixed.link.interferers = k;
        auto part = run_sweep("K=" + std::to_string(k), spec, mc);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      break;
    }
    case FigureId::fig2:
      break;  // handled above
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRow& row : rows) {
    os << row.curve_label << ',' << detail::format_double(row.axis_value) << ',';
    if (row.closed_form) os << detail::format_double(*row.closed_form);
    os << ',';
    if (row.mc_value) os << detail::format_double(*row.mc_value);
    os << ',';
    if (row.mc_stderr) os << detail::format_double(*row.mc_stderr);
    os << '\n';
  }
}

struct ValidationPoint {
  double xi0_db = 0.0;
  int interferers = 0;
  double theta = 0.0;
  double closed = 0.0;  // bits per frame
  McEstimate mc;
  double z = 0.0;
};

struct ValidationReport {
  std::vector<ValidationPoint> points;
  int within_3sigma = 0;
  bool pass = false;
};

/* Closed form against the approximate-model simulator over the standard
 * 27-point grid (SIR {0,10,20} dB x K {2,5,10} x theta {0.001,0.01,0.1},
 * 2x4 link, INR 10 dB). Passes when >= 95% of points land within three
 * standard errors. Each grid point draws from its own seed (a golden-ratio
 * stride off the base seed); otherwise every point with the same K would
 * reuse the identical sample path and one unlucky draw would shift a whole
 * row of z-scores together. theta_norm_scale != 1 deliberately corrupts the
 * closed form; it exists so the failure path is testable.
 */
inline ValidationReport run_validation(const McConfig& mc,
                                       double theta_norm_scale = 1.0) {
  ValidationReport report;
  LinkConfig cfg;  // 2x4, Rc=1, defaults
  int index = 0;
  for (double xi0_db : {0.0, 10.0, 20.0}) {
    for (int k : {2, 5, 10}) {
      for (double theta : {0.001, 0.01, 0.1}) {
        cfg.interferers = k;
        const InterferenceSpec spec =
            make_interference(db_to_linear(xi0_db), db_to_linear(10.0));
        QosSpec qos = make_qos(theta, cfg);
        qos.theta_norm *= theta_norm_scale;
        const double closed = -std::log(expectation_term(spec, cfg, qos)) / theta;
        McConfig point_mc = mc;
        point_mc.seed = mc.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(++index);
        const McEstimate est =
            mc_effective_capacity(spec, cfg, theta, point_mc, SinrModel::approx);
        ValidationPoint pt{xi0_db, k, theta, closed, est, 0.0};
        pt.z = (est.value - closed) / est.std_error;
        if (std::abs(pt.z) <= 3.0) ++report.within_3sigma;
        report.points.push_back(pt);
      }
    }
  }
  report.pass = report.within_3sigma >=
                static_cast<int>(std::ceil(0.95 * report.points.size()));
  return report;
}

}  // namespace ecap
