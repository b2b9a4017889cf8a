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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecap {

// Unsigned arbitrary-precision integer. Base 2^32 limbs, little endian,
// normalized (no trailing zero limbs; zero is the empty vector). Repeated
// convolution of binomial coefficient vectors overflows 64-bit integers
// quickly, so the coefficient pipeline carries these instead.
class BigUint {
 public:
  BigUint() = default;

  explicit BigUint(std::uint64_t v) {
    if (v != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(v));
      if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    }
  }

  bool is_zero() const { return limbs_.empty(); }

  friend bool operator==(const BigUint& a, const BigUint& b) = default;

  // <0, 0, >0 like memcmp.
  int compare(const BigUint& o) const {
    if (limbs_.size() != o.limbs_.size())
      return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
    }
    return 0;
  }

  BigUint& operator+=(const BigUint& o) {
    if (limbs_.size() < o.limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t cur = carry + limbs_[i];
      if (i < o.limbs_.size()) cur += o.limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    return *this;
  }

  friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }

  // Requires *this >= o.
  BigUint& operator-=(const BigUint& o) {
    if (compare(o) < 0) throw std::logic_error("BigUint: negative subtraction");
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::int64_t cur = static_cast<std::int64_t>(limbs_[i]) - borrow -
                         (i < o.limbs_.size() ? o.limbs_[i] : 0);
      borrow = cur < 0;
      if (cur < 0) cur += (std::int64_t{1} << 32);
      limbs_[i] = static_cast<std::uint32_t>(cur);
    }
    trim();
    return *this;
  }

  friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }

  friend BigUint operator*(const BigUint& a, const BigUint& b) {
    if (a.is_zero() || b.is_zero()) return {};
    BigUint out;
    out.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
        std::uint64_t cur = out.limbs_[i + j] +
                            static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                            carry;
        out.limbs_[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      out.limbs_[i + b.limbs_.size()] = static_cast<std::uint32_t>(carry);
    }
    out.trim();
    return out;
  }

  BigUint& operator*=(const BigUint& o) { return *this = *this * o; }

  // Exact division by a small divisor; throws if a remainder is left.
  BigUint& div_exact(std::uint32_t d) {
    if (d == 0) throw std::invalid_argument("BigUint: division by zero");
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      std::uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(cur / d);
      rem = cur % d;
    }
    if (rem != 0) throw std::logic_error("BigUint: inexact division");
    trim();
    return *this;
  }

  std::size_t bit_length() const {
    if (limbs_.empty()) return 0;
    std::size_t top = 32;
    std::uint32_t h = limbs_.back();
    while (!(h & 0x80000000u)) {
      h <<= 1;
      --top;
    }
    return 32 * (limbs_.size() - 1) + top;
  }

  // Saturates to +inf above the double range.
  double to_double() const {
    double v = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
    return v;
  }

  // Natural log; the top 96 bits carry more precision than a double needs.
  double ln() const {
    if (is_zero()) throw std::domain_error("BigUint: log of zero");
    if (limbs_.size() <= 3) return std::log(to_double());
    const std::size_t n = limbs_.size();
    double top = limbs_[n - 1];
    top = top * 4294967296.0 + limbs_[n - 2];
    top = top * 4294967296.0 + limbs_[n - 3];
    constexpr double kLn2Limb = 32.0 * 0.6931471805599453;  // ln(2^32)
    return std::log(top) + static_cast<double>(n - 3) * kLn2Limb;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    BigUint tmp = *this;
    std::string out;
    while (!tmp.is_zero()) {
      std::uint64_t rem = 0;
      for (std::size_t i = tmp.limbs_.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | tmp.limbs_[i];
        tmp.limbs_[i] = static_cast<std::uint32_t>(cur / 1000000000u);
        rem = cur % 1000000000u;
      }
      tmp.trim();
      std::string part = std::to_string(rem);
      if (!tmp.is_zero()) part.insert(0, 9 - part.size(), '0');
      out.insert(0, part);
    }
    return out;
  }

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint32_t> limbs_;
};

// C(n, k) by incremental multiply / exact divide.
inline BigUint binomial(int n, int k) {
  if (k < 0 || k > n) return BigUint{};
  if (k > n - k) k = n - k;
  BigUint t{1};
  for (int j = 1; j <= k; ++j) {
    t *= BigUint(static_cast<std::uint64_t>(n - j + 1));
    t.div_exact(static_cast<std::uint32_t>(j));
  }
  return t;
}

inline std::vector<BigUint> convolve(const std::vector<BigUint>& a,
                                     const std::vector<BigUint>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<BigUint> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_zero()) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

}  // namespace ecap
