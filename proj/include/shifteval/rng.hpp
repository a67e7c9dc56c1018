// Copyright 2026 The shifteval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHIFTEVAL_RNG_HPP_
#define SHIFTEVAL_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>

namespace shifteval {

/// Philox 4x32-10 counter-based generator (Salmon et al., SC 2011).
/// A stream is addressed by (key, counter[1..3]); counter[0] advances per
/// block of four 32-bit draws. Streams keyed by stable identifiers make
/// parallel generation order-independent and reproducible.
class Philox4x32 {
 public:
  Philox4x32(std::uint64_t key, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        counter_{0, c1, c2, c3} {}

  std::uint32_t next_u32() {
    if (index_ == 4) {
      block_ = run_rounds(counter_, key_);
      ++counter_[0];  // per-stream draws stay far below 2^32 blocks
      index_ = 0;
    }
    return block_[index_++];
  }

  /// Uniform in [0, 1).
  double next_unit() { return next_u32() * 0x1p-32; }

  /// Uniform in (0, 1].
  double next_open_unit() { return (static_cast<double>(next_u32()) + 1.0) * 0x1p-32; }

  /// Standard normal via the Box-Muller transform (fixed two draws).
  double next_normal() {
    const double u1 = next_open_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
  }

  /// Uniform integer in [0, n), multiply-shift mapping.
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(next_u32()) * n) >> 32);
  }

  /// Uniform integer in [lo, hi].
  int next_int(int lo, int hi) {
    return lo + static_cast<int>(next_below(static_cast<std::uint32_t>(hi - lo + 1)));
  }

  /// Knuth's product-of-uniforms sampler; fine for the small rates used here.
  int next_poisson(double lambda) {
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_unit();
    } while (p > limit);
    return k - 1;
  }

 private:
  static void single_round(std::array<std::uint32_t, 4>& ctr,
                           const std::array<std::uint32_t, 2>& key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }

  static std::array<std::uint32_t, 4> run_rounds(std::array<std::uint32_t, 4> ctr,
                                                 std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
    for (int round = 0; round < 10; ++round) {
      single_round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int index_ = 4;
};

}  // namespace shifteval

#endif  // SHIFTEVAL_RNG_HPP_
