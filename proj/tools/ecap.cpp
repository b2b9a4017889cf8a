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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ecap/closed_form.hpp"
#include "ecap/monte_carlo.hpp"
#include "ecap/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ECAP_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (end != env && *end == '\0') return v;
    std::cerr << "warning: ignoring unparsable ECAP_SEED='" << env << "'\n";
  }
  return ecap::kDefaultSeed;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// "-" means stdout; anything else is opened for writing.
int with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path == "-") {
    fn(std::cout);
    return kExitOk;
  }
  std::ofstream os(path);
  if (!os) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return kExitIo;
  }
  fn(os);
  os.flush();
  if (!os) {
    std::cerr << "error: write to '" << path << "' failed\n";
    return kExitIo;
  }
  return kExitOk;
}

struct LinkFlags {
  int m = 2;
  int n = 4;
  int k = 10;
  double rc = 1.0;
  double bandwidth_hz = 1e5;
  double frame_s = 1e-3;

  void attach(CLI::App* cmd) {
    cmd->add_option("--m", m, "transmit antennas")->check(CLI::PositiveNumber);
    cmd->add_option("--n", n, "receive antennas (one is selected)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--k", k, "co-channel interferers")->check(CLI::PositiveNumber);
    cmd->add_option("--rc", rc, "code rate, in (0, 1]")
        ->check(CLI::Range(1e-9, 1.0));
    cmd->add_option("--bandwidth-hz", bandwidth_hz, "spectral bandwidth B")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--frame-s", frame_s, "frame duration T_f")
        ->check(CLI::PositiveNumber);
  }

  ecap::LinkConfig config() const {
    ecap::LinkConfig cfg;
    cfg.tx_antennas = m;
    cfg.rx_antennas = n;
    cfg.interferers = k;
    cfg.code_rate = rc;
    cfg.bandwidth_hz = bandwidth_hz;
    cfg.frame_s = frame_s;
    return cfg;
  }
};

ecap::OutputSet parse_outputs(const std::string& csv) {
  ecap::OutputSet out{false, false, false};
  std::istringstream is(csv);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item == "closed")
      out.closed = true;
    else if (item == "mc_exact")
      out.mc_exact = true;
    else if (item == "mc_approx")
      out.mc_approx = true;
    else
      throw CLI::ValidationError("--outputs",
                                 "unknown output '" + item +
                                     "' (expected closed, mc_exact, mc_approx)");
  }
  if (!out.closed && !out.mc_exact && !out.mc_approx)
    throw CLI::ValidationError("--outputs", "at least one output is required");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective capacity of an OSTBC downlink with receive antenna "
               "selection under co-channel interference"};
  app.require_subcommand(1);

  // ---- effcap: one closed-form point -------------------------------------
  auto* effcap_cmd = app.add_subcommand(
      "effcap", "closed-form normalized effective capacity at one point");
  LinkFlags effcap_link;
  effcap_link.attach(effcap_cmd);
  double ec_xi0_db = 10.0, ec_zeta_db = 10.0, ec_theta = 0.01;
  effcap_cmd->add_option("--xi0-db", ec_xi0_db, "signal-to-interference ratio, dB");
  effcap_cmd->add_option("--zeta-db", ec_zeta_db, "interference-to-noise ratio, dB");
  effcap_cmd->add_option("--theta", ec_theta, "QoS exponent, 1/bit")
      ->check(CLI::PositiveNumber);

  // ---- figure: preset sweeps to CSV --------------------------------------
  auto* figure_cmd = app.add_subcommand("figure", "write a preset sweep as CSV");
  std::string fig_id;
  std::string fig_out = "-";
  long long fig_trials = 1'000'000;
  std::uint64_t fig_seed = default_seed();
  int fig_threads = 0;
  int fig_m = 0;
  std::string fig_outputs = "closed,mc_exact";
  figure_cmd->add_option("--id", fig_id, "preset: fig2..fig8")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"}));
  figure_cmd->add_option("--out", fig_out, "output path, '-' for stdout");
  figure_cmd->add_option("--trials", fig_trials, "Monte Carlo trials per point")
      ->check(CLI::PositiveNumber);
  figure_cmd->add_option("--seed", fig_seed, "random seed (flag > ECAP_SEED > default)");
  figure_cmd->add_option("--threads", fig_threads, "worker threads, 0 = hardware");
  figure_cmd->add_option("--m", fig_m, "transmit antennas (fig6 variant)")
      ->check(CLI::PositiveNumber);
  figure_cmd->add_option("--outputs", fig_outputs,
                         "comma list of closed, mc_exact, mc_approx");

  // ---- validate: closed form against the simulator -----------------------
  auto* validate_cmd = app.add_subcommand(
      "validate", "closed form vs Monte Carlo over the standard grid");
  long long val_trials = 1'000'000;
  std::uint64_t val_seed = default_seed();
  long long val_chunk = 0;
  int val_threads = 0;
  double val_corrupt = 1.0;
  validate_cmd->add_option("--trials", val_trials, "Monte Carlo trials per point")
      ->check(CLI::PositiveNumber);
  validate_cmd->add_option("--seed", val_seed, "random seed");
  validate_cmd->add_option("--chunk", val_chunk, "trials per substream, 0 = auto");
  validate_cmd->add_option("--threads", val_threads, "worker threads, 0 = hardware");
  validate_cmd->add_option("--corrupt-theta-norm", val_corrupt)->group("");

  // ---- queue-sim: constant-arrival backlog tail --------------------------
  auto* queue_cmd = app.add_subcommand(
      "queue-sim", "simulate the constant-arrival queue and fit the tail slope");
  LinkFlags queue_link;
  queue_link.attach(queue_cmd);
  double q_xi0_db = 10.0, q_zeta_db = 10.0, q_theta_ref = 0.01;
  std::optional<double> q_arrival;
  long long q_frames = 10'000'000;
  std::uint64_t q_seed = default_seed();
  double q_max = 0.0;
  int q_points = 49;
  std::string q_out = "-";
  queue_cmd->add_option("--xi0-db", q_xi0_db, "signal-to-interference ratio, dB");
  queue_cmd->add_option("--zeta-db", q_zeta_db, "interference-to-noise ratio, dB");
  queue_cmd->add_option("--theta-ref", q_theta_ref,
                        "QoS exponent the arrival rate is derived from")
      ->check(CLI::PositiveNumber);
  queue_cmd->add_option("--arrival", q_arrival,
                        "arrival rate, bits/frame (default: closed-form "
                        "effective capacity at --theta-ref)");
  queue_cmd->add_option("--frames", q_frames, "measured frames")
      ->check(CLI::PositiveNumber);
  queue_cmd->add_option("--seed", q_seed, "random seed");
  queue_cmd->add_option("--q-max", q_max, "largest backlog threshold, bits "
                                          "(default 14/theta_ref)");
  queue_cmd->add_option("--q-points", q_points, "threshold count")
      ->check(CLI::Range(2, 100000));
  queue_cmd->add_option("--out", q_out, "output path, '-' for stdout");

  // ---- fit-gamma: moment fit of the weighted interference sum ------------
  auto* fit_cmd = app.add_subcommand(
      "fit-gamma", "moment-matched Gamma fit for a weighted exponential sum");
  std::vector<double> fit_zetas;
  long long fit_trials = 1'000'000;
  std::uint64_t fit_seed = default_seed();
  std::string fit_out;
  fit_cmd->add_option("--zetas", fit_zetas, "per-interferer INR weights, linear")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--trials", fit_trials, "simulated draws")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--seed", fit_seed, "random seed");
  fit_cmd->add_option("--out", fit_out, "also write the CDF table CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(effcap_cmd)) {
      const ecap::LinkConfig cfg = effcap_link.config();
      const auto spec = ecap::make_interference(ecap::db_to_linear(ec_xi0_db),
                                                ecap::db_to_linear(ec_zeta_db));
      const ecap::QosSpec qos = ecap::make_qos(ec_theta, cfg);
      const double ec_norm = ecap::normalized_effective_capacity(spec, cfg, ec_theta);
      std::cout << "m,n,k,rc,xi0_db,zeta_db,theta,theta_norm,ec_norm\n"
                << effcap_link.m << ',' << effcap_link.n << ',' << effcap_link.k
                << ',' << fmt(effcap_link.rc) << ',' << fmt(ec_xi0_db) << ','
                << fmt(ec_zeta_db) << ',' << fmt(ec_theta) << ','
                << fmt(qos.theta_norm) << ',' << fmt(ec_norm) << '\n';
      return kExitOk;
    }

    if (app.got_subcommand(figure_cmd)) {
      ecap::FigureOptions opts;
      opts.trials = fig_trials;
      opts.seed = fig_seed;
      opts.threads = fig_threads;
      opts.tx_antennas = fig_m;
      opts.outputs = parse_outputs(fig_outputs);
      const auto rows = ecap::figure_rows(*ecap::parse_figure_id(fig_id), opts);
      return with_output(fig_out,
                         [&](std::ostream& os) { ecap::write_sweep_csv(os, rows); });
    }

    if (app.got_subcommand(validate_cmd)) {
      ecap::McConfig mc;
      mc.trials = val_trials;
      mc.seed = val_seed;
      mc.chunk = val_chunk;
      mc.threads = val_threads;
      const ecap::ValidationReport report = ecap::run_validation(mc, val_corrupt);
      std::cout << "xi0_db,k,theta,closed_bits,mc_bits,mc_stderr,z\n";
      for (const auto& pt : report.points) {
        std::cout << fmt(pt.xi0_db) << ',' << pt.interferers << ',' << fmt(pt.theta)
                  << ',' << fmt(pt.closed) << ',' << fmt(pt.mc.value) << ','
                  << fmt(pt.mc.std_error) << ',' << fmt(pt.z) << '\n';
      }
      std::cerr << "validate: " << report.within_3sigma << '/' << report.points.size()
                << " points within 3 standard errors -> "
                << (report.pass ? "PASS" : "FAIL") << '\n';
      return report.pass ? kExitOk : kExitValidationFailure;
    }

    if (app.got_subcommand(queue_cmd)) {
      const ecap::LinkConfig cfg = queue_link.config();
      const auto spec = ecap::make_interference(ecap::db_to_linear(q_xi0_db),
                                                ecap::db_to_linear(q_zeta_db));
      const double arrival =
          q_arrival ? *q_arrival : ecap::effective_capacity(spec, cfg, q_theta_ref);
      ecap::McConfig mc;
      mc.trials = q_frames;
      mc.seed = q_seed;
      std::vector<double> grid;
      if (q_max > 0.0)
        for (int i = 0; i < q_points; ++i)
          grid.push_back(q_max * i / (q_points - 1));
      const ecap::QueueTailResult result =
          ecap::queue_tail_exponent(arrival, spec, cfg, q_theta_ref, mc, grid);
      const int code = with_output(q_out, [&](std::ostream& os) {
        os << "q_bits,tail_prob\n";
        for (std::size_t i = 0; i < result.q_grid.size(); ++i)
          os << fmt(result.q_grid[i]) << ',' << fmt(result.tail_probs[i]) << '\n';
      });
      std::cerr << "queue-sim: arrival=" << fmt(arrival)
                << " bits/frame, fitted slope=" << fmt(result.slope)
                << ", theta_ref=" << fmt(q_theta_ref) << '\n';
      return code;
    }

    if (app.got_subcommand(fit_cmd)) {
      const ecap::GammaFit fit = ecap::fit_gamma_moments(fit_zetas);
      ecap::McConfig mc;
      mc.trials = fit_trials;
      mc.seed = fit_seed;
      ecap::RandomStream rng(mc.seed, 0);
      std::vector<double> draws(static_cast<std::size_t>(fit_trials));
      for (double& d : draws) {
        double acc = 0.0;
        for (double w : fit_zetas) acc += w * rng.exponential();
        d = acc;
      }
      const double ks = ecap::ks_distance(
          std::move(draws), [&](double x) { return ecap::gamma_cdf(x, fit); });
      std::cout << "shape,scale,ks_distance,trials\n"
                << fmt(fit.shape) << ',' << fmt(fit.scale) << ',' << fmt(ks) << ','
                << fit_trials << '\n';
      if (!fit_out.empty()) {
        const ecap::EmpiricalCdf table = ecap::mc_weighted_gamma_cdf(fit_zetas, mc);
        return with_output(fit_out, [&](std::ostream& os) {
          os << "x,empirical_cdf,fitted_cdf\n";
          for (std::size_t i = 0; i < table.grid.size(); ++i)
            os << fmt(table.grid[i]) << ',' << fmt(table.cdf[i]) << ','
               << fmt(ecap::gamma_cdf(table.grid[i], fit)) << '\n';
        });
      }
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
