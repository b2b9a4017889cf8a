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
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ecap/beta_prime.hpp"
#include "ecap/link.hpp"
#include "ecap/specfun.hpp"

namespace ecap {

namespace detail {

/* ln E{ (1 + sir/(M R_c) * W)^(-theta_norm) } where W is the maximum of
 * rx_antennas i.i.d. Beta-prime(M, K) gains: the finite sum of
 * Beta * 2F1 terms over the order-statistic coefficients, assembled and
 * combined entirely in the log domain (coefficients are huge, Beta values
 * tiny, the 2F1 factor can be either; the expectation itself underflows a
 * double for very strict QoS exponents).
 */
inline double ln_expectation_term(const InterferenceSpec& spec, const LinkConfig& cfg,
                                  const QosSpec& qos) {
  validate(cfg);
  validate(spec);
  if (qos.theta_norm < 0.0)
    throw std::domain_error("expectation_term: requires theta_norm >= 0");

  const int m = cfg.tx_antennas;
  const int n = cfg.rx_antennas;
  const int k = cfg.interferers;
  const double tb = qos.theta_norm;
  const BetaPrimeParams bp{m, k};

  // The literal prefactor simplifies to 1; verify once per evaluation and
  // keep the literal value in the normalization so the check has teeth.
  const double pref = cdf_prefactor(bp);
  if (std::abs(pref - 1.0) > 1e-9)
    throw std::logic_error("expectation_term: CDF prefactor check failed");

  const CoefficientVector q = order_stat_coefficients(bp, n);
  const double ln_norm =
      std::log(static_cast<double>(n)) - ln_beta(m, k) + (n - 1) * std::log(pref);
  const double hyper_c = n * (m + k - 1) + 1 + tb;
  const double z = 1.0 - spec.sir / (m * cfg.code_rate);

  std::vector<double> ln_terms;
  ln_terms.reserve(q.coeffs.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < q.coeffs.size(); ++j) {
    if (q.coeffs[j].is_zero()) continue;
    const int power = q.offset + static_cast<int>(j);
    const double beta_b = hyper_c - (m + power);
    // provably >= K + theta_norm for every power in range
    if (beta_b + 1e-9 < k + tb)
      throw std::logic_error("expectation_term: Beta argument below its bound");
    const SignedLog h = hyp2f1_log(tb, m + power, hyper_c, z);
    if (h.sign <= 0)
      throw std::logic_error("expectation_term: summand must be positive");
    ln_terms.push_back(q.coeffs[j].ln() + ln_beta(m + power, beta_b) + h.log_abs);
    peak = std::max(peak, ln_terms.back());
  }
  double sum = 0.0;
  for (double lt : ln_terms) sum += std::exp(lt - peak);
  const double ln_value = ln_norm + peak + std::log(sum);
  return std::min(ln_value, 0.0);  // the expectation never exceeds 1
}

}  // namespace detail

// E{ (1 + sir/(M R_c) * W)^(-theta_norm) }, in (0, 1]. May underflow to 0
// for extreme exponents; effective_capacity stays in the log domain instead.
inline double expectation_term(const InterferenceSpec& spec, const LinkConfig& cfg,
                               const QosSpec& qos) {
  return std::exp(detail::ln_expectation_term(spec, cfg, qos));
}

/* Effective capacity in bits per frame: -(1/theta) ln E{e^(-theta R)} with
 * R the selected-antenna rate. Nonnegative, below the mean rate, and
 * decreasing in theta.
 */
inline double effective_capacity(const InterferenceSpec& spec, const LinkConfig& cfg,
                                 double theta) {
  const QosSpec qos = make_qos(theta, cfg);
  return -detail::ln_expectation_term(spec, cfg, qos) / theta;
}

// Effective capacity normalized by B * T_f, in bits/s/Hz.
inline double normalized_effective_capacity(const InterferenceSpec& spec,
                                            const LinkConfig& cfg, double theta) {
  return effective_capacity(spec, cfg, theta) / (cfg.bandwidth_hz * cfg.frame_s);
}

}  // namespace ecap
