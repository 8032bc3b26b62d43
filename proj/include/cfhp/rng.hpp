// SPDX-License-Identifier: Apache-2.0
//
// cfhp - hybrid and fully digital precoding for cell-free mmWave MIMO
// Copyright (C) 2026 The cfhp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CFHP_RNG_HPP
#define CFHP_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace cfhp {

// Counter-based random streams.
//
// A stream is identified by a 64-bit key. Keys are derived from the master
// seed by folding a path of integers through the SplitMix64 finalizer:
//
//   key = seed;  for x in path: key = mix64(key ^ mix64(x + 0x9E3779B97F4A7C15))
//
// The k-th draw of a stream (k = 1, 2, ...) is mix64(key + k * 0x9E3779B97F4A7C15).
// Draws therefore depend only on (seed, path, k), never on evaluation order,
// and trials can be generated in any order or in parallel.

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t key = seed;
  for (std::uint64_t x : path)
    key = mix64(key ^ mix64(x + 0x9E3779B97F4A7C15ULL));
  return key;
}

/// Purpose tags for the first element of a derivation path.
enum class StreamTag : std::uint64_t { kChannel = 1, kAnalog = 2, kTest = 99 };

class RandomStream {
public:
  explicit constexpr RandomStream(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (lo, hi].
  double uniform_left_open(double lo, double hi) { return hi - (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (one variate per pair of draws).
  double gaussian() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Circularly-symmetric CN(0, 1).
  std::complex<double> complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

  [[nodiscard]] constexpr std::uint64_t draws() const { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline RandomStream make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t trial,
                                std::uint64_t a = 0, std::uint64_t b = 0) {
  return RandomStream(derive_key(seed, {static_cast<std::uint64_t>(tag), trial, a, b}));
}

} // namespace cfhp

#endif // CFHP_RNG_HPP
