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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "ecap/closed_form.hpp"
#include "ecap/monte_carlo.hpp"
#include "ecap/sweep.hpp"
#include "support/quadrature.hpp"

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  %d. %-28s %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double lin(double db) { return std::pow(10.0, db / 10.0); }

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// ---- 1. published selection gains at 20 dB SIR ---------------------------

void criterion_gain_values() {
  const auto t0 = std::chrono::steady_clock::now();
  ecap::LinkConfig ras;   // 2x4, K=10
  ecap::LinkConfig miso;  // 2x1
  miso.rx_antennas = 1;
  const auto spec = ecap::make_interference(lin(20.0), lin(10.0));
  const std::vector<std::pair<double, double>> targets = {
      {0.1, 1.5415}, {0.01, 1.3845}, {0.001, 1.0880}};
  bool pass = true;
  std::string detail;
  for (const auto& [theta, target] : targets) {
    const double gap = ecap::normalized_effective_capacity(spec, ras, theta) -
                       ecap::normalized_effective_capacity(spec, miso, theta);
    pass = pass && std::abs(gap - target) <= 0.05;
    detail += fmt("theta=%g: %.4f (want %.4f+-0.05)  ", theta, gap, target);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  pass = pass && secs < 1.0;
  report(1, "selection-gain values", pass, detail + fmt("[%.2fs]", secs));
}

// ---- 2. closed form vs quadrature over the parameter grid ----------------

void criterion_closed_vs_quadrature() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string worst_at;
  for (int m : {1, 2, 4}) {
    for (int n : {1, 2, 4}) {
      for (int k : {1, 2, 5, 10}) {
        const ecap::BetaPrimeParams bp{m, k};
        const ecap::OrderStatDensity density(bp, n);
        for (double xi0 : {1.0, 10.0, 100.0}) {
          for (double tb : {0.1, 1.4427, 14.427}) {
            ecap::LinkConfig cfg;
            cfg.tx_antennas = m;
            cfg.rx_antennas = n;
            cfg.interferers = k;
            const auto spec = ecap::make_interference(xi0, 1.0);
            const double closed = ecap::expectation_term(spec, cfg, {0.01, tb});
            const double scale = xi0 / (m * cfg.code_rate);
            const double quad = oracle::expectation_oracle(
                [&](double x) { return density(x); }, bp, n, scale, tb);
            const double rel = oracle::rel_err(closed, quad);
            if (rel > worst) {
              worst = rel;
              worst_at = fmt("(M=%d,N=%d,K=%d,xi0=%g,tb=%g)", m, n, k, xi0, tb);
            }
          }
        }
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(2, "closed form vs quadrature", worst <= 1e-8 && secs < 60.0,
         fmt("worst rel err %.2e at %s [%.1fs]", worst, worst_at.c_str(), secs));
}

// ---- 3. closed form vs Monte Carlo at one million trials ------------------

void criterion_closed_vs_mc() {
  // Fixed seed, one million trials (the published simulation budget). The
  // strict-QoS/high-SIR corner (20 dB, K=2, theta=0.1) is spike-dominated:
  // its expectation rides on draws of probability ~5e-8, so a 1e6-trial
  // mean cannot reach it at any seed; the criterion's 95% allowance is what
  // absorbs it.
  ecap::McConfig mc;
  mc.trials = 1'000'000;
  mc.seed = 2;
  const ecap::ValidationReport report_grid = ecap::run_validation(mc);
  std::string detail = fmt("%d/%d within 3 sigma", report_grid.within_3sigma,
                           static_cast<int>(report_grid.points.size()));
  for (const auto& pt : report_grid.points) {
    if (std::abs(pt.z) > 3.0)
      detail += fmt("; outlier (%g dB, K=%d, theta=%g) z=%.1f", pt.xi0_db,
                    pt.interferers, pt.theta, pt.z);
  }
  report(3, "closed form vs Monte Carlo", report_grid.pass, detail);
}

// ---- 4. exact-vs-approximate gap shrinks with the INR ---------------------

void criterion_model_gap_trend() {
  ecap::LinkConfig cfg;  // 2x4, K=10
  ecap::McConfig mc;
  mc.seed = 0xACCE9702;
  std::vector<double> gaps;
  std::string detail;
  for (double zeta_db : {0.0, 10.0, 20.0}) {
    const auto spec = ecap::make_interference(lin(10.0), lin(zeta_db));
    // common seed: both models consume the identical draw sequence
    const auto exact =
        ecap::mc_effective_capacity(spec, cfg, 0.01, mc, ecap::SinrModel::exact);
    const auto approx =
        ecap::mc_effective_capacity(spec, cfg, 0.01, mc, ecap::SinrModel::approx);
    gaps.push_back(std::abs(exact.value - approx.value));
    detail += fmt("INR %gdB: %.3f  ", zeta_db, gaps.back());
  }
  const bool pass = gaps[0] > gaps[1] && gaps[1] > gaps[2];
  report(4, "model gap decreasing in INR", pass, detail + "(bits/frame)");
}

// ---- 5. distribution layer -------------------------------------------------

void criterion_distribution_layer() {
  bool pass = true;
  std::string detail;

  double worst_pref = 0.0;
  for (int a = 1; a <= 8 && pass; ++a) {
    for (int b = 1; b <= 8 && pass; ++b) {
      const auto pv = ecap::cdf_coefficients({a, b});
      for (int k = 1; k <= a - 1; ++k)
        if (!pv.coeffs[k - 1].is_zero()) pass = false;
      worst_pref = std::max(worst_pref, std::abs(ecap::cdf_prefactor({a, b}) - 1.0));
    }
  }
  pass = pass && worst_pref <= 1e-12;
  detail += fmt("prefactor dev %.1e  ", worst_pref);

  double worst_cdf = 0.0;
  for (int a = 1; a <= 6; ++a) {
    for (int b = 1; b <= 6; ++b) {
      for (double x : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        const double quad = oracle::beta_prime_pdf_mass({a, b}, x);
        worst_cdf =
            std::max(worst_cdf, std::abs(ecap::beta_prime_cdf_closed(x, {a, b}) - quad));
      }
    }
  }
  pass = pass && worst_cdf <= 1e-8;
  detail += fmt("cdf vs quad %.1e  ", worst_cdf);

  ecap::RandomStream rng(0xACCE9705);
  const ecap::BetaPrimeParams bp{2, 4};
  std::vector<double> draws(1'000'000);
  for (double& d : draws) d = ecap::sample_beta_prime(bp, rng);
  const double ks = ecap::ks_distance(
      std::move(draws), [&](double x) { return ecap::beta_prime_cdf_closed(x, bp); });
  pass = pass && ks < 0.002;
  detail += fmt("sampler KS %.4f", ks);

  report(5, "distribution layer", pass, detail);
}

// ---- 6. special functions ---------------------------------------------------

void criterion_special_functions() {
  bool pass = true;
  std::string detail;

  pass = pass && std::abs(ecap::ln_gamma(1.0)) <= 1e-12;
  pass = pass && std::abs(ecap::ln_gamma(5.0) - 3.1780538303479458) <= 1e-12;
  pass = pass && std::abs(ecap::ln_gamma(0.5) - 0.5723649429247001) <= 1e-12;
  pass = pass && std::abs(ecap::ln_beta(1, 1)) <= 1e-12;
  pass = pass && std::abs(ecap::ln_beta(2, 3) - std::log(1.0 / 12.0)) <= 1e-12;
  pass = pass && std::abs(ecap::ln_beta(2, 10) - std::log(1.0 / 110.0)) <= 1e-12;
  pass = pass && ecap::hyp2f1(0.3, 2.0, 4.5, 0.0) == 1.0;
  pass = pass &&
         oracle::rel_err(ecap::hyp2f1(1, 1, 2, 0.5), 2.0 * std::log(2.0)) <= 1e-12;
  pass = pass && oracle::rel_err(ecap::hyp2f1(2, 3, 3, -1.0), 0.25) <= 1e-12;

  const double at_minus49 = ecap::hyp2f1(1.4427, 4, 14, -49);
  const double euler = oracle::hyp2f1_euler(1.4427, 4, 14, -49);
  const double rel = oracle::rel_err(at_minus49, euler);
  pass = pass && rel <= 1e-8;
  detail = fmt("2F1(-49)=%.12g vs Euler %.12g (rel %.1e)", at_minus49, euler, rel);

  report(6, "special functions", pass, detail);
}

// ---- 7. queue-tail slope matches the QoS exponent --------------------------

void criterion_queue_semantics() {
  ecap::LinkConfig cfg;  // 2x4, K=10
  const auto spec = ecap::make_interference(lin(10.0), lin(10.0));
  const double theta = 0.01;
  const double arrival = ecap::effective_capacity(spec, cfg, theta);
  ecap::McConfig mc;
  mc.trials = 10'000'000;
  mc.seed = 0xACCE9707;
  const auto result = ecap::queue_tail_exponent(arrival, spec, cfg, theta, mc);
  const double rel = std::abs(result.slope - theta) / theta;
  report(7, "queue-tail slope", std::isfinite(result.slope) && rel <= 0.15,
         fmt("slope %.5f vs theta %.3g (off by %.1f%%) at 1e7 frames", result.slope,
             theta, 100.0 * rel));
}

// ---- 8. monotonicity and convergence on the default grids ------------------

void criterion_monotonicity() {
  bool pass = true;
  std::string detail;
  ecap::FigureOptions closed_only;
  closed_only.outputs = ecap::OutputSet{true, false, false};

  // increasing in the SIR along every preset curve (INR 10 dB presets)
  {
    const auto rows = ecap::figure_rows(ecap::FigureId::fig4, closed_only);
    std::map<std::string, double> prev;
    for (const auto& row : rows) {
      const auto it = prev.find(row.curve_label);
      if (it != prev.end() && !(*row.closed_form > it->second)) pass = false;
      prev[row.curve_label] = *row.closed_form;
    }
    if (!pass) detail += "SIR monotonicity broken  ";
  }

  // decreasing in theta along each curve; decreasing in K at fixed theta;
  // curves coalesce at strict QoS
  {
    const auto rows = ecap::figure_rows(ecap::FigureId::fig8, closed_only);
    std::map<std::string, double> prev;
    std::map<double, std::map<std::string, double>> by_theta;
    bool theta_ok = true;
    for (const auto& row : rows) {
      const auto it = prev.find(row.curve_label);
      if (it != prev.end() && !(*row.closed_form < it->second)) theta_ok = false;
      prev[row.curve_label] = *row.closed_form;
      by_theta[row.axis_value][row.curve_label] = *row.closed_form;
    }
    bool k_ok = true;
    for (const auto& [theta, curves] : by_theta) {
      if (!(curves.at("K=5") > curves.at("K=10") && curves.at("K=10") > curves.at("K=20")))
        k_ok = false;
    }
    auto spread = [&](double theta) {
      const auto& curves = by_theta.at(theta);
      double lo = 1e300, hi = -1e300;
      for (const auto& [label, v] : curves) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      return hi - lo;
    };
    const double loose = by_theta.begin()->first;
    const double strict = by_theta.rbegin()->first;
    double scale = 0.0;
    for (const auto& [label, v] : by_theta.at(loose)) scale = std::max(scale, v);
    // curves coalesce to within 5% of the plot scale at the strict end
    const bool converges = spread(strict) < 0.05 * scale;
    if (!theta_ok) detail += "theta monotonicity broken  ";
    if (!k_ok) detail += "K ordering broken  ";
    if (!converges) detail += "no strict-QoS convergence  ";
    detail += fmt("spread %.4f -> %.4f (%.1f%% of scale %.3f)  ", spread(loose),
                  spread(strict), 100.0 * spread(strict) / scale, scale);
    pass = pass && theta_ok && k_ok && converges;
  }

  // more receive antennas always help
  {
    const auto rows = ecap::figure_rows(ecap::FigureId::fig6, closed_only);
    std::map<double, std::map<std::string, double>> by_xi0;
    for (const auto& row : rows)
      by_xi0[row.axis_value][row.curve_label] = *row.closed_form;
    bool n_ok = true;
    for (const auto& [xi0, curves] : by_xi0) {
      if (!(curves.at("N=4") > curves.at("N=3") && curves.at("N=3") > curves.at("N=2") &&
            curves.at("N=2") > curves.at("N=1")))
        n_ok = false;
    }
    if (!n_ok) detail += "N ordering broken  ";
    pass = pass && n_ok;
  }

  report(8, "monotonicity suite", pass, detail);
}

}  // namespace

int main() {
  criterion_gain_values();
  criterion_closed_vs_quadrature();
  criterion_closed_vs_mc();
  criterion_model_gap_trend();
  criterion_distribution_layer();
  criterion_special_functions();
  criterion_queue_semantics();
  criterion_monotonicity();
  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
