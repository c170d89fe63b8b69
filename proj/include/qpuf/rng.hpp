// Copyright 2026 The qpuf Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QPUF_RNG_HPP
#define QPUF_RNG_HPP

#include <bit>
#include <cstdint>
#include <limits>

namespace qpuf {

/// SplitMix64 finalizer; used to fan one experiment seed out into
/// independent per-index streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` inside domain `domain` of experiment `seed`.
/// The same triple always yields the same stream regardless of thread layout.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t domain, std::uint64_t index = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(domain)) + index);
}

/// xoshiro256** engine. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      w = splitmix64(x - 0x9e3779b97f4a7c15ULL);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t out = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return out;
  }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform symbol label in {0,1,2,3}.
  unsigned symbol() { return static_cast<unsigned>((*this)() >> 62); }

 private:
  std::uint64_t s_[4];
};

/// Stream domains. Kept in one place so no two subsystems share a stream.
namespace stream {
inline constexpr std::uint64_t kCells = 1;
inline constexpr std::uint64_t kEnrollEval = 2;
inline constexpr std::uint64_t kReconstructEval = 3;
inline constexpr std::uint64_t kGenieFrames = 4;
inline constexpr std::uint64_t kChannelEstimate = 5;
inline constexpr std::uint64_t kSecretSeed = 6;
inline constexpr std::uint64_t kMask = 7;
inline constexpr std::uint64_t kSalt = 8;
inline constexpr std::uint64_t kFerFrames = 9;
}  // namespace stream

}  // namespace qpuf

#endif  // QPUF_RNG_HPP
