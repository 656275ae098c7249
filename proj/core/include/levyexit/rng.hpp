/*
   Copyright 2026 The levyexit Authors

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

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace levyexit {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// stream(base_seed, stream_id): the key is the 64-bit seed, the high half of
// the 128-bit counter is the stream id. Streams are statistically independent
// and reproducible regardless of scheduling, which is what the per-path Monte
// Carlo streams rely on.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  Philox4x32(std::uint64_t seed, std::uint64_t stream) {
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    ctr_ = {0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (have_ == 0) {
      block();
      // 128-bit counter increment restricted to the per-stream low 64 bits
      if (++ctr_[0] == 0u) ++ctr_[1];
    }
    const int i = 4 - have_;
    have_ -= 2;
    return (static_cast<std::uint64_t>(buf_[i + 1]) << 32) | buf_[i];
  }

 private:
  static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
  }

  void block() {
    std::array<std::uint32_t, 4> c = ctr_;
    std::array<std::uint32_t, 2> k = key_;
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2511F53u, c[0], hi0, lo0);
      mulhilo(0xCD9E8D57u, c[2], hi1, lo1);
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    buf_ = c;
    have_ = 4;
  }

  std::array<std::uint32_t, 4> ctr_{};
  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> buf_{};
  int have_ = 0;
};

// Deterministic scalar distributions on top of the raw bit stream. The
// std::* distributions are implementation-defined, so byte-stable outputs
// across toolchains go through these instead.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : gen_(seed, stream) {}

  std::uint64_t bits() { return gen_(); }

  /// Uniform on [0,1), 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0,1); safe under log and inverse-power maps.
  double uniform_oo() { return (static_cast<double>(gen_() >> 12) + 0.5) * 0x1.0p-52; }

  /// Exponential with the given rate; strictly positive.
  double exponential(double rate) { return -std::log(uniform_oo()) / rate; }

  /// Standard normal (Box-Muller, pairs cached).
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_oo()));
    const double a = kTau * uniform01();
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  /// Poisson count; Knuth product method, normal approximation for huge means.
  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 500.0) {
      const double k = std::floor(mean + std::sqrt(mean) * normal() + 0.5);
      return k < 0.0 ? 0 : static_cast<long>(k);
    }
    const double limit = std::exp(-mean);
    long k = 0;
    double prod = uniform_oo();
    while (prod > limit) {
      ++k;
      prod *= uniform_oo();
    }
    return k;
  }

 private:
  static constexpr double kTau = 6.283185307179586476925286766559;
  Philox4x32 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace levyexit
