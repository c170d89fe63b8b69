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

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qpuf/gf4.hpp"
#include "simd/variants.hpp"

namespace qpuf::simd {

KernelTables KernelTables::build(const std::array<std::array<std::uint8_t, 4>, 4>& g) {
  KernelTables t;
  t.g = g;
  for (unsigned k = 0; k < 4; ++k) {
    const unsigned free = 3 - k;
    const unsigned nc = 1u << (2 * free);
    t.branch[k].resize(4 * nc);
    for (unsigned a = 0; a < 4; ++a) {
      for (unsigned c = 0; c < nc; ++c) {
        unsigned u[4] = {0, 0, 0, 0};
        u[k] = a;
        for (unsigned p = 0; p < free; ++p) u[k + 1 + p] = (c >> (2 * p)) & 3u;
        unsigned packed = 0;
        for (unsigned j = 0; j < 4; ++j) {
          unsigned x = 0;
          for (unsigned i = 0; i < 4; ++i) x ^= kGf4Mul[u[i]][g[i][j]];
          packed |= x << (2 * j);
        }
        t.branch[k][a * nc + c] = static_cast<std::uint8_t>(packed);
      }
    }
  }
  return t;
}

namespace scalar {

void kernel_update_one(const KernelTables& tables, unsigned k, const double* parent, const std::uint8_t* decided,
                       std::size_t m, std::size_t t, double* child) {
  unsigned d[4] = {0, 0, 0, 0};
  for (unsigned i = 0; i < k; ++i) {
    const unsigned v = decided[i * m + t];
    for (unsigned r = 0; r < 4; ++r) d[r] ^= kGf4Mul[v][tables.g[i][r]];
  }
  // P[r][s] = lambda_r^(s ^ d_r): the LLRs seen by the undecided part
  double p[4][4];
  for (unsigned r = 0; r < 4; ++r)
    for (unsigned s = 0; s < 4; ++s) p[r][s] = parent[(s ^ d[r]) * 4 * m + r * m + t];

  const unsigned nc = 1u << (2 * (3 - k));
  const std::uint8_t* br = tables.branch[k].data();
  double best[4];
  for (unsigned a = 0; a < 4; ++a) {
    double b = -std::numeric_limits<double>::infinity();
    for (unsigned c = 0; c < nc; ++c) {
      const unsigned x = br[a * nc + c];
      const double s = ((p[0][x & 3u] + p[1][(x >> 2) & 3u]) + p[2][(x >> 4) & 3u]) + p[3][x >> 6];
      const double ns = -s;
      b = b > ns ? b : ns;  // same tie rule as vector max
    }
    best[a] = b;
  }
  for (unsigned a = 0; a < 4; ++a) child[a * m + t] = best[0] - best[a];
}

void kernel_update(const KernelTables& tables, unsigned k, const double* parent, const std::uint8_t* decided,
                   std::size_t m, double* child) {
  for (std::size_t t = 0; t < m; ++t) kernel_update_one(tables, k, parent, decided, m, t, child);
}

void gray_enumerate(const PackedRowMultiples& rows, std::uint64_t begin, std::uint64_t end, std::uint64_t* hist) {
  if (begin >= end) return;
  const std::size_t w = rows.words;
  std::vector<std::uint64_t> lo(w, 0), hi(w, 0);
  std::vector<unsigned> cur(rows.dim, 0);
  for (std::size_t j = 0; j < rows.dim; ++j) {
    cur[j] = gray_digit(begin, static_cast<unsigned>(j));
    const std::uint64_t* l = rows.plane(j, cur[j], 0);
    const std::uint64_t* h = rows.plane(j, cur[j], 1);
    for (std::size_t q = 0; q < w; ++q) {
      lo[q] ^= l[q];
      hi[q] ^= h[q];
    }
  }
  auto weight = [&] {
    std::size_t s = 0;
    for (std::size_t q = 0; q < w; ++q) s += static_cast<std::size_t>(std::popcount(lo[q] | hi[q]));
    return s;
  };
  ++hist[weight()];
  for (std::uint64_t i = begin + 1; i < end; ++i) {
    const unsigned j = static_cast<unsigned>(std::countr_zero(i)) / 2;
    const unsigned nd = gray_digit(i, j);
    const unsigned delta = cur[j] ^ nd;
    cur[j] = nd;
    const std::uint64_t* l = rows.plane(j, delta, 0);
    const std::uint64_t* h = rows.plane(j, delta, 1);
    for (std::size_t q = 0; q < w; ++q) {
      lo[q] ^= l[q];
      hi[q] ^= h[q];
    }
    ++hist[weight()];
  }
}

}  // namespace scalar
}  // namespace qpuf::simd
