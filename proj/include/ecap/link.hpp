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
#include <numbers>
#include <optional>
#include <stdexcept>

namespace ecap {

/* Deterministic description of the link: an OSTBC transmitter with
 * tx_antennas elements, a receiver selecting one of rx_antennas, and
 * `interferers` equal-power co-channel interferers.
 */
struct LinkConfig {
  int tx_antennas = 2;
  int rx_antennas = 4;
  int interferers = 10;
  double code_rate = 1.0;       // symbols per slot, in (0, 1]
  double bandwidth_hz = 1e5;    // B
  double frame_s = 1e-3;        // T_f

  // bits carried per unit of log2(1 + SINR)
  double bits_per_log2() const { return bandwidth_hz * frame_s * code_rate; }
};

inline void validate(const LinkConfig& cfg) {
  if (cfg.tx_antennas < 1 || cfg.rx_antennas < 1 || cfg.interferers < 1)
    throw std::invalid_argument("LinkConfig: antenna/interferer counts must be >= 1");
  if (!(cfg.code_rate > 0.0) || cfg.code_rate > 1.0)
    throw std::invalid_argument("LinkConfig: code_rate must be in (0, 1]");
  if (!(cfg.bandwidth_hz > 0.0) || !(cfg.frame_s > 0.0))
    throw std::invalid_argument("LinkConfig: bandwidth and frame duration must be positive");
}

/* QoS exponent theta (1/bit) and its dimensionless form
 * theta_norm = theta * B * T_f * R_c / ln 2.
 */
struct QosSpec {
  double theta = 0.0;
  double theta_norm = 0.0;
};

inline QosSpec make_qos(double theta, const LinkConfig& cfg) {
  validate(cfg);
  if (!(theta > 0.0)) throw std::domain_error("make_qos: requires theta > 0");
  return {theta, theta * cfg.bits_per_log2() / std::numbers::ln2};
}

// Bits per frame at a given post-combining SINR.
inline double rate_bits(double sinr, const LinkConfig& cfg) {
  if (sinr < 0.0) throw std::domain_error("rate_bits: requires sinr >= 0");
  return cfg.bits_per_log2() * std::log1p(sinr) / std::numbers::ln2;
}

/* Interference geometry, all linear scale: sir is the signal-to-interference
 * ratio, inr the per-interferer interference-to-noise ratio, and snr the
 * average link SNR (sir * inr). snr is only consumed by the exact-model
 * sampler; the closed form never needs it.
 */
struct InterferenceSpec {
  double sir = 1.0;
  double inr = 1.0;
  std::optional<double> snr;
};

inline InterferenceSpec make_interference(double sir, double inr) {
  if (!(sir > 0.0) || !(inr > 0.0))
    throw std::invalid_argument("make_interference: ratios must be positive");
  InterferenceSpec spec;
  spec.sir = sir;
  spec.inr = inr;
  spec.snr = sir * inr;
  return spec;
}

inline void validate(const InterferenceSpec& spec) {
  if (!(spec.sir > 0.0) || !(spec.inr > 0.0))
    throw std::invalid_argument("InterferenceSpec: ratios must be positive");
  if (spec.snr) {
    const double implied = *spec.snr / spec.inr;
    if (std::abs(implied - spec.sir) > 1e-12 * std::abs(spec.sir))
      throw std::invalid_argument("InterferenceSpec: snr, inr and sir disagree");
  }
}

}  // namespace ecap
