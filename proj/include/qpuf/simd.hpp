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

#ifndef QPUF_SIMD_HPP
#define QPUF_SIMD_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

// Data-parallel inner loops with a scalar reference and ISA-specific
// variants chosen once at startup. Every variant must produce bit-identical
// results to the scalar one.

namespace qpuf::simd {

enum class Isa { kScalar, kAvx2 };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);
/// Best supported ISA unless overridden by set_active_isa().
Isa active_isa();
/// Throws std::runtime_error if `isa` is not supported on this CPU/build.
void set_active_isa(Isa isa);

/// Precomputed tables for one 4x4 kernel over GF(4).
struct KernelTables {
  std::array<std::array<std::uint8_t, 4>, 4> g{};
  /// branch[k][a * 4^(3-k) + c]: kernel output for input (0..0, a, c) where
  /// `a` sits at position k and c enumerates the 4^(3-k) completions of
  /// positions k+1..3. Output symbols packed 2 bits each, x0 lowest.
  std::array<std::vector<std::uint8_t>, 4> branch;

  static KernelTables build(const std::array<std::array<std::uint8_t, 4>, 4>& g);
};

/// LLR update for kernel input position k over m independent kernel
/// instances (max-log approximation).
///   parent  : LLRs of the 4 kernel outputs, parent[s*4m + j*m + t] = lambda_j^(s)
///   decided : previously decided inputs, decided[i*m + t] for i < k
///   child   : child[s*m + t], child[0*m + t] == 0
using KernelUpdateFn = void (*)(const KernelTables& tables, unsigned k, const double* parent,
                                const std::uint8_t* decided, std::size_t m, double* child);

/// Rows of a GF(4) generator in bit-plane form with all four scalar
/// multiples precomputed, padded to a multiple of 4 words per plane.
struct PackedRowMultiples {
  std::size_t dim = 0;
  std::size_t words = 0;  // words per plane (padded)
  std::size_t length = 0;  // code length in symbols
  /// data[((row * 4 + mult) * 2 + plane) * words + w]
  std::vector<std::uint64_t> data;

  const std::uint64_t* plane(std::size_t row, unsigned mult, unsigned p) const {
    return data.data() + ((row * 4 + mult) * 2 + p) * words;
  }
};

/// Digit j of the reflected base-4 Gray code of counter value i.
inline unsigned gray_digit(std::uint64_t i, unsigned j) {
  const unsigned d = static_cast<unsigned>(i >> (2 * j)) & 3u;
  const unsigned up = (2 * j + 2 < 64) ? static_cast<unsigned>(i >> (2 * j + 2)) & 3u : 0u;
  return (up & 1u) ? 3u - d : d;
}

/// Adds the Hamming weight of codeword sum_j gray_digit(i, j) * row_j for
/// every counter value i in [begin, end) into hist (length + 1 buckets).
using GrayEnumerateFn = void (*)(const PackedRowMultiples& rows, std::uint64_t begin, std::uint64_t end,
                                 std::uint64_t* hist);

struct Kernels {
  Isa isa;
  KernelUpdateFn kernel_update;
  GrayEnumerateFn gray_enumerate;
};

/// Table for the active ISA.
const Kernels& kernels();
/// Table for a specific ISA; throws if unsupported.
const Kernels& kernels_for(Isa isa);

}  // namespace qpuf::simd

#endif  // QPUF_SIMD_HPP
