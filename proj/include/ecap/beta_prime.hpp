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
#include <span>
#include <stdexcept>
#include <vector>

#include "ecap/bigint.hpp"
#include "ecap/random.hpp"
#include "ecap/specfun.hpp"

namespace ecap {

/* Beta-prime distribution with integer shapes: the law of
 * Gamma(alpha,1) / Gamma(beta,1) for independent draws. In the link model,
 * alpha is the combined signal branch count and beta the interferer count.
 */
struct BetaPrimeParams {
  int alpha = 1;  // numerator shape, >= 1
  int beta = 1;   // denominator shape, >= 1
};

namespace detail {
inline void check(const BetaPrimeParams& p) {
  if (p.alpha < 1 || p.beta < 1)
    throw std::invalid_argument("BetaPrimeParams: shapes must be >= 1");
}
}  // namespace detail

/* Exact nonnegative integer coefficients of a polynomial in x:
 * coeffs[j] multiplies x^(offset + j).
 */
struct CoefficientVector {
  int offset = 0;
  std::vector<BigUint> coeffs;
};

// f(x) = x^(alpha-1) (1+x)^(-alpha-beta) / B(alpha, beta), x >= 0.
inline double beta_prime_pdf(double x, const BetaPrimeParams& p) {
  detail::check(p);
  if (x < 0.0) throw std::domain_error("beta_prime_pdf: requires x >= 0");
  const double lb = ln_beta(p.alpha, p.beta);
  if (x == 0.0) return p.alpha > 1 ? 0.0 : std::exp(-lb);
  return std::exp((p.alpha - 1) * std::log(x) -
                  (p.alpha + p.beta) * std::log1p(x) - lb);
}

/* Closed-form CDF coefficients p_1 .. p_(alpha+beta-1), offset 1.
 *
 * Two-branch form: below k = alpha the binomial term and the signed
 * product term cancel exactly (the CDF has no mass below x^alpha); both
 * sides are still evaluated so the cancellation is checked, not assumed.
 */
inline CoefficientVector cdf_coefficients(const BetaPrimeParams& p) {
  detail::check(p);
  const int n = p.alpha + p.beta - 1;
  CoefficientVector out;
  out.offset = 1;
  out.coeffs.reserve(n);
  BigUint falling_over_fact{1};  // prod_{j=1..k} (alpha+beta-j) / k!
  for (int k = 1; k <= n; ++k) {
    BigUint pk = binomial(n, k);
    if (k <= p.alpha - 1) {
      falling_over_fact *= BigUint(static_cast<std::uint64_t>(p.alpha + p.beta - k));
      falling_over_fact.div_exact(static_cast<std::uint32_t>(k));
      // (-1)^(k+1) prod_{j=1..k}(j-alpha-beta) / k! == -falling_over_fact
      pk -= falling_over_fact;
    }
    out.coeffs.push_back(std::move(pk));
  }
  return out;
}

/* Scalar prefactor of the closed-form CDF,
 * (-1)^alpha (alpha-1)! / (B(alpha,beta) prod_{m=1..alpha} (m-alpha-beta)),
 * evaluated from that expression. It simplifies to exactly 1; callers
 * verify that numerically rather than substituting it.
 */
inline double cdf_prefactor(const BetaPrimeParams& p) {
  detail::check(p);
  double ln_prod = 0.0;
  int sign = (p.alpha % 2 == 0) ? 1 : -1;  // (-1)^alpha
  for (int m = 1; m <= p.alpha; ++m) {
    ln_prod += std::log(static_cast<double>(p.alpha + p.beta - m));
    sign = -sign;  // each factor m - alpha - beta is negative
  }
  return sign * std::exp(ln_gamma(p.alpha) - ln_beta(p.alpha, p.beta) - ln_prod);
}

/* Closed-form CDF: prefactor * sum_k p_k x^k / (1+x)^(alpha+beta-1).
 * Evaluated as sum_k p_k t^k s^(n-k) with t = x/(1+x), s = 1/(1+x), in the
 * log domain, so no power here can overflow.
 */
inline double beta_prime_cdf_closed(double x, const BetaPrimeParams& p) {
  detail::check(p);
  if (x < 0.0) throw std::domain_error("beta_prime_cdf_closed: requires x >= 0");
  if (x == 0.0) return 0.0;
  const CoefficientVector pv = cdf_coefficients(p);
  const int n = p.alpha + p.beta - 1;
  const double ln_t = std::log(x) - std::log1p(x);
  const double ln_s = -std::log1p(x);
  double acc = 0.0;
  for (std::size_t j = 0; j < pv.coeffs.size(); ++j) {
    if (pv.coeffs[j].is_zero()) continue;
    const int k = pv.offset + static_cast<int>(j);
    acc += std::exp(pv.coeffs[j].ln() + k * ln_t + (n - k) * ln_s);
  }
  const double f = cdf_prefactor(p) * acc;
  return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

/* Coefficients of [F(x) numerator]^(n-1): the CDF coefficient vector
 * convolved with itself n-1 times, offset n-1. n = 1 gives the
 * multiplicative identity [1] at offset 0.
 */
inline CoefficientVector order_stat_coefficients(const BetaPrimeParams& p, int n) {
  detail::check(p);
  if (n < 1) throw std::invalid_argument("order_stat_coefficients: requires n >= 1");
  if (n == 1) return {0, {BigUint{1}}};
  const CoefficientVector base = cdf_coefficients(p);
  CoefficientVector out = base;
  for (int i = 2; i < n; ++i) {
    out.coeffs = convolve(out.coeffs, base.coeffs);
    out.offset += base.offset;
  }
  return out;
}

/* Density of the maximum of n i.i.d. Beta-prime draws, in the expanded
 * coefficient form. Precomputes log coefficients once; evaluation is a
 * short positive sum. Equal pointwise to n f(x) F(x)^(n-1).
 */
class OrderStatDensity {
 public:
  OrderStatDensity(const BetaPrimeParams& p, int n) : denom_power_(0), ln_norm_(0.0) {
    const CoefficientVector q = order_stat_coefficients(p, n);
    denom_power_ = n * (p.alpha + p.beta - 1) + 1;
    ln_norm_ = std::log(static_cast<double>(n)) - ln_beta(p.alpha, p.beta) +
               (n - 1) * std::log(cdf_prefactor(p));
    terms_.reserve(q.coeffs.size());
    for (std::size_t j = 0; j < q.coeffs.size(); ++j) {
      if (q.coeffs[j].is_zero()) continue;
      const int k = q.offset + static_cast<int>(j);
      terms_.push_back({p.alpha + k - 1, q.coeffs[j].ln()});
    }
  }

  double operator()(double x) const {
    if (x < 0.0) throw std::domain_error("max_order_pdf: requires x >= 0");
    if (x == 0.0) {
      // only an x^0 term survives, which exists iff alpha == 1 and n == 1
      return terms_.front().x_power == 0 ? std::exp(ln_norm_) : 0.0;
    }
    const double ln_x = std::log(x);
    const double ln_1px = std::log1p(x);
    double acc = 0.0;
    for (const Term& t : terms_)
      acc += std::exp(t.ln_coeff + t.x_power * ln_x - denom_power_ * ln_1px);
    return std::exp(ln_norm_) * acc;
  }

 private:
  struct Term {
    int x_power;
    double ln_coeff;
  };
  int denom_power_;
  double ln_norm_;
  std::vector<Term> terms_;
};

inline double max_order_pdf(double x, const BetaPrimeParams& p, int n) {
  return OrderStatDensity(p, n)(x);
}

// Gamma(shape, 1) draw for integer shape: sum of exponentials.
inline double sample_gamma(int shape, RandomStream& rng) {
  if (shape < 1) throw std::invalid_argument("sample_gamma: requires shape >= 1");
  double sum = 0.0;
  for (int i = 0; i < shape; ++i) sum += rng.exponential();
  return sum;
}

// Ratio of independent Gamma(alpha,1) / Gamma(beta,1) draws.
inline double sample_beta_prime(const BetaPrimeParams& p, RandomStream& rng) {
  detail::check(p);
  const double num = sample_gamma(p.alpha, rng);
  const double den = sample_gamma(p.beta, rng);
  return num / den;
}

struct GammaFit {
  double shape = 1.0;  // > 0
  double scale = 1.0;  // > 0
};

/* Moment-matched Gamma fit for sum_k w_k E_k with E_k i.i.d. Exp(1):
 * mean = sum w, variance = sum w^2, so shape = mean^2/var, scale = var/mean.
 */
inline GammaFit fit_gamma_moments(std::span<const double> weights) {
  if (weights.empty())
    throw std::invalid_argument("fit_gamma_moments: needs at least one weight");
  double mean = 0.0;
  double var = 0.0;
  for (double w : weights) {
    if (!(w > 0.0))
      throw std::domain_error("fit_gamma_moments: weights must be positive");
    mean += w;
    var += w * w;
  }
  return {mean * mean / var, var / mean};
}

inline double gamma_cdf(double x, const GammaFit& fit) {
  if (x <= 0.0) return 0.0;
  return gamma_p(fit.shape, x / fit.scale);
}

}  // namespace ecap
