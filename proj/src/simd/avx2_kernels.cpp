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

#include <immintrin.h>

#include <bit>
#include <vector>

#include "qpuf/gf4.hpp"
#include "simd/variants.hpp"

namespace qpuf::simd::avx2 {
namespace {

// Per-lane select of src[d] for d in {0,1,2,3}, d given as 64-bit lanes.
inline __m256d select4(const __m256d src[4], __m256i d) {
  const __m256d m1 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(d, _mm256_set1_epi64x(1)));
  const __m256d m2 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(d, _mm256_set1_epi64x(2)));
  const __m256d m3 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(d, _mm256_set1_epi64x(3)));
  __m256d r = src[0];
  r = _mm256_blendv_pd(r, src[1], m1);
  r = _mm256_blendv_pd(r, src[2], m2);
  r = _mm256_blendv_pd(r, src[3], m3);
  return r;
}

// Nibble-table popcount of each 64-bit lane.
inline __m256i popcount_epi64(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

inline std::size_t hsum_epi64(__m256i v) {
  const __m128i s = _mm_add_epi64(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  return static_cast<std::size_t>(_mm_cvtsi128_si64(s) + _mm_extract_epi64(s, 1));
}

}  // namespace

void kernel_update(const KernelTables& tables, unsigned k, const double* parent, const std::uint8_t* decided,
                   std::size_t m, double* child) {
  const unsigned nc = 1u << (2 * (3 - k));
  const std::uint8_t* br = tables.branch[k].data();
  const std::size_t m4 = m & ~std::size_t{3};
  const __m256d neg_inf = _mm256_set1_pd(-__builtin_inf());
  const __m256d sign = _mm256_set1_pd(-0.0);

  for (std::size_t t = 0; t < m4; t += 4) {
    __m256d p[4][4];
    if (k == 0) {
      for (unsigned r = 0; r < 4; ++r)
        for (unsigned s = 0; s < 4; ++s) p[r][s] = _mm256_loadu_pd(parent + s * 4 * m + r * m + t);
    } else {
      alignas(32) std::int64_t d[4][4] = {};
      for (unsigned i = 0; i < k; ++i)
        for (unsigned lane = 0; lane < 4; ++lane) {
          const unsigned v = decided[i * m + t + lane];
          for (unsigned r = 0; r < 4; ++r) d[r][lane] ^= kGf4Mul[v][tables.g[i][r]];
        }
      for (unsigned r = 0; r < 4; ++r) {
        __m256d lam[4];
        for (unsigned s = 0; s < 4; ++s) lam[s] = _mm256_loadu_pd(parent + s * 4 * m + r * m + t);
        const __m256i dr = _mm256_load_si256(reinterpret_cast<const __m256i*>(d[r]));
        for (unsigned s = 0; s < 4; ++s) {
          const __m256d shuffled[4] = {lam[s], lam[s ^ 1u], lam[s ^ 2u], lam[s ^ 3u]};
          p[r][s] = select4(shuffled, dr);
        }
      }
    }
    __m256d best[4];
    for (unsigned a = 0; a < 4; ++a) {
      __m256d b = neg_inf;
      for (unsigned c = 0; c < nc; ++c) {
        const unsigned x = br[a * nc + c];
        const __m256d s = _mm256_add_pd(
            _mm256_add_pd(_mm256_add_pd(p[0][x & 3u], p[1][(x >> 2) & 3u]), p[2][(x >> 4) & 3u]), p[3][x >> 6]);
        b = _mm256_max_pd(b, _mm256_xor_pd(s, sign));
      }
      best[a] = b;
    }
    for (unsigned a = 0; a < 4; ++a) _mm256_storeu_pd(child + a * m + t, _mm256_sub_pd(best[0], best[a]));
  }
  for (std::size_t t = m4; t < m; ++t) scalar::kernel_update_one(tables, k, parent, decided, m, t, child);
}

void gray_enumerate(const PackedRowMultiples& rows, std::uint64_t begin, std::uint64_t end, std::uint64_t* hist) {
  if (begin >= end) return;
  const std::size_t w = rows.words;  // multiple of 4
  const std::size_t vecs = w / 4;
  struct Lane {
    __m256i v;
  };
  std::vector<Lane> lo(vecs, Lane{_mm256_setzero_si256()}), hi(vecs, Lane{_mm256_setzero_si256()});
  std::vector<unsigned> cur(rows.dim, 0);
  auto apply = [&](std::size_t j, unsigned mult) {
    const std::uint64_t* l = rows.plane(j, mult, 0);
    const std::uint64_t* h = rows.plane(j, mult, 1);
    for (std::size_t q = 0; q < vecs; ++q) {
      lo[q].v = _mm256_xor_si256(lo[q].v, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(l + 4 * q)));
      hi[q].v = _mm256_xor_si256(hi[q].v, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(h + 4 * q)));
    }
  };
  auto weight = [&] {
    __m256i acc = _mm256_setzero_si256();
    for (std::size_t q = 0; q < vecs; ++q)
      acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_or_si256(lo[q].v, hi[q].v)));
    return hsum_epi64(acc);
  };
  for (std::size_t j = 0; j < rows.dim; ++j) {
    cur[j] = gray_digit(begin, static_cast<unsigned>(j));
    apply(j, cur[j]);
  }
  ++hist[weight()];
  for (std::uint64_t i = begin + 1; i < end; ++i) {
    const unsigned j = static_cast<unsigned>(std::countr_zero(i)) / 2;
    const unsigned nd = gray_digit(i, j);
    apply(j, cur[j] ^ nd);
    cur[j] = nd;
    ++hist[weight()];
  }
}

}  // namespace qpuf::simd::avx2
