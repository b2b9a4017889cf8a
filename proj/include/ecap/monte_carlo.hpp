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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ecap/beta_prime.hpp"
#include "ecap/link.hpp"
#include "ecap/random.hpp"

namespace ecap {

inline constexpr std::uint64_t kDefaultSeed = 123456789ull;

/* Trial budget and reproducibility contract. Trials are split into
 * fixed-size chunks; chunk i always consumes substream i of `seed`, and
 * chunk summaries are merged in index order, so results are bit-identical
 * for a given (seed, chunk, trials) regardless of thread count.
 * chunk == 0 picks trials/256; threads == 0 uses the hardware count.
 */
struct McConfig {
  long long trials = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  long long chunk = 0;
  int threads = 0;
};

// Point estimate with a between-chunk standard error.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long long trials = 0;
};

enum class SinrModel { exact, approx };

namespace detail {

struct ChunkPlan {
  long long size;
  long long count;
};

inline ChunkPlan plan_chunks(const McConfig& mc) {
  if (mc.trials < 1) throw std::invalid_argument("McConfig: trials must be >= 1");
  long long size = mc.chunk > 0 ? mc.chunk : std::max<long long>(1, mc.trials / 256);
  const long long count = (mc.trials + size - 1) / size;
  // the between-chunk variance needs a real population behind it
  if (mc.chunk > 0 && mc.trials >= 100 && count < 100)
    throw std::invalid_argument("McConfig: chunk too large, need >= 100 chunks");
  return {size, count};
}

template <class Fn>
void run_chunks(long long chunk_count, int threads, Fn&& fn) {
  int n = threads > 0 ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  n = static_cast<int>(std::min<long long>(n, chunk_count));
  if (n == 1) {
    for (long long i = 0; i < chunk_count; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (long long i; (i = next.fetch_add(1)) < chunk_count;) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/* Per-antenna SINR draws, exact interference model:
 * snr/(M R_c) * Gamma(M) / (1 + sum_k inr_k * Exp_k), independently per
 * antenna. An empty interferer list degenerates to the noise-only link.
 * Draw order (signal block first, interferer block second) matches the
 * approximate sampler, so runs with a common seed are pathwise comparable.
 */
inline void sample_sinr_exact(const InterferenceSpec& spec, const LinkConfig& cfg,
                              std::span<const double> interferer_inrs,
                              RandomStream& rng, std::span<double> out) {
  validate(cfg);
  validate(spec);
  if (!spec.snr)
    throw std::invalid_argument("sample_sinr_exact: spec.snr is required");
  if (out.size() != static_cast<std::size_t>(cfg.rx_antennas))
    throw std::invalid_argument("sample_sinr_exact: output size != rx_antennas");
  const double scale = *spec.snr / (cfg.tx_antennas * cfg.code_rate);
  for (double& sinr : out) {
    double signal = 0.0;
    for (int i = 0; i < cfg.tx_antennas; ++i) signal += rng.exponential();
    double interference = 0.0;
    for (double inr : interferer_inrs) interference += inr * rng.exponential();
    sinr = scale * signal / (1.0 + interference);
  }
}

/* Per-antenna SINR draws, interference-dominated approximation:
 * sir/(M R_c) * BetaPrime(M, K) per antenna.
 */
inline void sample_sinr_approx(const InterferenceSpec& spec, const LinkConfig& cfg,
                               RandomStream& rng, std::span<double> out) {
  validate(cfg);
  validate(spec);
  if (out.size() != static_cast<std::size_t>(cfg.rx_antennas))
    throw std::invalid_argument("sample_sinr_approx: output size != rx_antennas");
  const double scale = spec.sir / (cfg.tx_antennas * cfg.code_rate);
  const BetaPrimeParams bp{cfg.tx_antennas, cfg.interferers};
  for (double& sinr : out) sinr = scale * sample_beta_prime(bp, rng);
}

namespace detail {

inline double best_antenna_rate(const InterferenceSpec& spec, const LinkConfig& cfg,
                                std::span<const double> interferer_inrs,
                                SinrModel model, RandomStream& rng,
                                std::span<double> scratch) {
  if (model == SinrModel::exact)
    sample_sinr_exact(spec, cfg, interferer_inrs, rng, scratch);
  else
    sample_sinr_approx(spec, cfg, rng, scratch);
  const double best = *std::max_element(scratch.begin(), scratch.end());
  return rate_bits(best, cfg);
}

struct WeightedMean {
  double value;
  double std_error;
};

// Weighted between-chunk variance of the mean; exact classic s/sqrt(C)
// for equal chunks, graceful for a ragged tail chunk.
inline WeightedMean combine_chunk_means(std::span<const double> means,
                                        std::span<const long long> counts,
                                        long long total) {
  double mean = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i)
    mean += means[i] * (static_cast<double>(counts[i]) / total);
  double var = 0.0;
  if (means.size() > 1) {
    for (std::size_t i = 0; i < means.size(); ++i) {
      const double w = static_cast<double>(counts[i]) / total;
      var += w * w * (means[i] - mean) * (means[i] - mean);
    }
    var *= static_cast<double>(means.size()) / (means.size() - 1.0);
  }
  return {mean, std::sqrt(var)};
}

}  // namespace detail

/* Monte Carlo effective capacity: per trial, select the best of
 * rx_antennas SINR draws under `model`, convert to a per-frame rate R and
 * average e^(-theta R); the estimate is -(1/theta) ln(mean). Chunk sums are
 * kept as running log-sum-exp so arbitrarily strict theta cannot underflow,
 * and the standard error follows from the between-chunk variance by the
 * delta method.
 */
inline McEstimate mc_effective_capacity(const InterferenceSpec& spec,
                                        const LinkConfig& cfg, double theta,
                                        const McConfig& mc, SinrModel model) {
  validate(cfg);
  validate(spec);
  if (!(theta > 0.0))
    throw std::domain_error("mc_effective_capacity: requires theta > 0");
  if (model == SinrModel::exact && !spec.snr)
    throw std::invalid_argument("mc_effective_capacity: exact model needs spec.snr");

  const detail::ChunkPlan plan = detail::plan_chunks(mc);
  const std::vector<double> inrs(
      model == SinrModel::exact ? cfg.interferers : 0, spec.inr);
  std::vector<double> chunk_lse(plan.count);
  std::vector<long long> chunk_n(plan.count);

  detail::run_chunks(plan.count, mc.threads, [&](long long ci) {
    RandomStream rng(mc.seed, static_cast<std::uint64_t>(ci));
    const long long n =
        std::min(plan.size, mc.trials - ci * plan.size);
    std::vector<double> scratch(cfg.rx_antennas);
    double peak = -std::numeric_limits<double>::infinity();
    double acc = 0.0;  // sum of exp(x - peak)
    for (long long t = 0; t < n; ++t) {
      const double x =
          -theta * detail::best_antenna_rate(spec, cfg, inrs, model, rng, scratch);
      if (x <= peak) {
        acc += std::exp(x - peak);
      } else {
        acc = acc * std::exp(peak - x) + 1.0;
        peak = x;
      }
    }
    chunk_lse[ci] = peak + std::log(acc);
    chunk_n[ci] = n;
  });

  // shift all chunk means by the largest before leaving the log domain
  std::vector<double> log_means(plan.count);
  for (long long i = 0; i < plan.count; ++i)
    log_means[i] = chunk_lse[i] - std::log(static_cast<double>(chunk_n[i]));
  const double shift = *std::max_element(log_means.begin(), log_means.end());
  std::vector<double> scaled(plan.count);
  for (long long i = 0; i < plan.count; ++i)
    scaled[i] = std::exp(log_means[i] - shift);
  const auto [mean, se] = detail::combine_chunk_means(scaled, chunk_n, mc.trials);

  McEstimate est;
  est.value = -(shift + std::log(mean)) / theta;
  est.std_error = se / (theta * mean);
  est.trials = mc.trials;
  return est;
}

// Mean per-frame rate E{R} under antenna selection; the theta -> 0 limit
// of the effective capacity.
inline McEstimate mc_mean_rate(const InterferenceSpec& spec, const LinkConfig& cfg,
                               const McConfig& mc, SinrModel model) {
  validate(cfg);
  validate(spec);
  if (model == SinrModel::exact && !spec.snr)
    throw std::invalid_argument("mc_mean_rate: exact model needs spec.snr");

  const detail::ChunkPlan plan = detail::plan_chunks(mc);
  const std::vector<double> inrs(
      model == SinrModel::exact ? cfg.interferers : 0, spec.inr);
  std::vector<double> chunk_mean(plan.count);
  std::vector<long long> chunk_n(plan.count);

  detail::run_chunks(plan.count, mc.threads, [&](long long ci) {
    RandomStream rng(mc.seed, static_cast<std::uint64_t>(ci));
    const long long n = std::min(plan.size, mc.trials - ci * plan.size);
    std::vector<double> scratch(cfg.rx_antennas);
    double acc = 0.0;
    for (long long t = 0; t < n; ++t)
      acc += detail::best_antenna_rate(spec, cfg, inrs, model, rng, scratch);
    chunk_mean[ci] = acc / n;
    chunk_n[ci] = n;
  });

  const auto [mean, se] = detail::combine_chunk_means(chunk_mean, chunk_n, mc.trials);
  return {mean, se, mc.trials};
}

struct EmpiricalCdf {
  std::vector<double> grid;
  std::vector<double> cdf;
};

/* Empirical CDF of sum_k w_k Exp_k on a uniform grid over
 * [0, mean + 6 std], both moments from the weights themselves. Compare
 * against fit_gamma_moments to judge the Gamma approximation.
 */
inline EmpiricalCdf mc_weighted_gamma_cdf(std::span<const double> weights,
                                          const McConfig& mc) {
  const GammaFit fit = fit_gamma_moments(weights);  // validates weights
  const double mean = fit.shape * fit.scale;
  const double stddev = std::sqrt(fit.shape) * fit.scale;
  if (mc.trials < 1) throw std::invalid_argument("McConfig: trials must be >= 1");

  std::vector<double> samples(mc.trials);
  RandomStream rng(mc.seed, 0);
  for (double& s : samples) {
    double acc = 0.0;
    for (double w : weights) acc += w * rng.exponential();
    s = acc;
  }
  std::sort(samples.begin(), samples.end());

  constexpr int kPoints = 201;
  EmpiricalCdf out;
  out.grid.resize(kPoints);
  out.cdf.resize(kPoints);
  const double hi = mean + 6.0 * stddev;
  for (int i = 0; i < kPoints; ++i) {
    const double x = hi * i / (kPoints - 1);
    out.grid[i] = x;
    const auto it = std::upper_bound(samples.begin(), samples.end(), x);
    out.cdf[i] = static_cast<double>(it - samples.begin()) / mc.trials;
  }
  return out;
}

// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_distance(std::vector<double> samples,
                          const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(std::abs(f - (i + 1) / n), std::abs(f - i / n)));
  }
  return d;
}

struct QueueTailResult {
  double slope = 0.0;  // estimated -d ln Pr{Q > q} / dq; NaN if unfittable
  std::vector<double> q_grid;
  std::vector<double> tail_probs;
};

/* Constant-arrival queue fed by the selected-antenna service process:
 * Q_{t+1} = max(Q_t + arrival - R_t, 0), R_t i.i.d. from the approximate
 * model. The first 10% of frames are warm-up and discarded. Tail
 * probabilities are measured on q_grid (default: 49 points spanning
 * [0, 14/theta_ref]) and the log-tail slope is fitted by least squares over
 * the points with probability inside [1e-4, 1e-1].
 */
inline QueueTailResult queue_tail_exponent(double arrival_bits_per_frame,
                                           const InterferenceSpec& spec,
                                           const LinkConfig& cfg, double theta_ref,
                                           const McConfig& mc,
                                           std::vector<double> q_grid = {}) {
  validate(cfg);
  validate(spec);
  if (!(arrival_bits_per_frame > 0.0))
    throw std::domain_error("queue_tail_exponent: requires arrival > 0");
  if (!(theta_ref > 0.0))
    throw std::domain_error("queue_tail_exponent: requires theta_ref > 0");
  if (mc.trials < 10)
    throw std::invalid_argument("queue_tail_exponent: too few frames");
  if (q_grid.empty()) {
    const double q_max = 14.0 / theta_ref;
    for (int i = 0; i < 49; ++i) q_grid.push_back(q_max * i / 48.0);
  }
  if (!std::is_sorted(q_grid.begin(), q_grid.end()))
    throw std::invalid_argument("queue_tail_exponent: q_grid must be increasing");

  RandomStream rng(mc.seed, 0);
  std::vector<double> scratch(cfg.rx_antennas);
  const long long warmup = mc.trials / 10;
  std::vector<long long> hist(q_grid.size() + 1, 0);
  double queue = 0.0;
  double service_sum = 0.0;
  for (long long t = 0; t < warmup + mc.trials; ++t) {
    const double r =
        detail::best_antenna_rate(spec, cfg, {}, SinrModel::approx, rng, scratch);
    queue = std::max(queue + arrival_bits_per_frame - r, 0.0);
    if (t >= warmup) {
      service_sum += r;
      const auto it = std::lower_bound(q_grid.begin(), q_grid.end(), queue);
      ++hist[it - q_grid.begin()];  // grid points strictly below the backlog
    }
  }
  const double mean_service = service_sum / mc.trials;
  if (arrival_bits_per_frame >= mean_service)
    throw std::runtime_error("queue_tail_exponent: arrival rate >= mean service rate");

  QueueTailResult out;
  out.q_grid = std::move(q_grid);
  out.tail_probs.resize(out.q_grid.size());
  long long above = 0;
  for (std::size_t j = out.q_grid.size(); j-- > 0;) {
    above += hist[j + 1];
    out.tail_probs[j] = static_cast<double>(above) / mc.trials;
  }

  // least squares on ln p over the usable probability window
  double sq = 0.0, sl = 0.0, sqq = 0.0, sql = 0.0;
  int pts = 0;
  for (std::size_t j = 0; j < out.q_grid.size(); ++j) {
    const double p = out.tail_probs[j];
    if (p < 1e-4 || p > 1e-1) continue;
    const double lp = std::log(p);
    sq += out.q_grid[j];
    sl += lp;
    sqq += out.q_grid[j] * out.q_grid[j];
    sql += out.q_grid[j] * lp;
    ++pts;
  }
  const double denom = pts * sqq - sq * sq;
  out.slope = (pts >= 2 && denom > 0.0)
                  ? -(pts * sql - sq * sl) / denom
                  : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace ecap
