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

#ifndef QPUF_TESTS_ORACLES_HPP
#define QPUF_TESTS_ORACLES_HPP

// Slow, independent reference implementations used only by the tests.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qpuf/gf4.hpp"

namespace oracle {

/// GF(4) product as polynomial multiplication modulo x^2 + x + 1.
inline unsigned gf4_mul(unsigned a, unsigned b) {
  unsigned p = 0;
  for (unsigned i = 0; i < 2; ++i)
    if (b & (1u << i)) p ^= a << i;
  if (p & 4u) p ^= 0b111;  // x^2 = x + 1
  return p & 3u;
}

using Matrix = std::vector<std::vector<unsigned>>;

/// Kronecker product over GF(4).
inline Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t ra = a.size(), rb = b.size();
  Matrix out(ra * rb, std::vector<unsigned>(ra * rb, 0));
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t j = 0; j < ra; ++j)
      for (std::size_t k = 0; k < rb; ++k)
        for (std::size_t l = 0; l < rb; ++l) out[i * rb + k][j * rb + l] = gf4_mul(a[i][j], b[k][l]);
  return out;
}

/// Rank over GF(4) by Gaussian elimination on a copy.
inline std::size_t rank(Matrix m) {
  static const unsigned inv[4] = {0, 1, 3, 2};
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const unsigned iv = inv[m[r][c]];
    for (auto& x : m[r]) x = gf4_mul(x, iv);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const unsigned f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] ^= gf4_mul(f, m[r][j]);
    }
    ++r;
  }
  return r;
}

/// All 4^k combinations of the rows.
inline std::vector<std::vector<unsigned>> span(const Matrix& rows, std::size_t n) {
  std::vector<std::vector<unsigned>> out{std::vector<unsigned>(n, 0)};
  for (const auto& g : rows) {
    const std::size_t m = out.size();
    for (unsigned a = 1; a < 4; ++a)
      for (std::size_t i = 0; i < m; ++i) {
        auto v = out[i];
        for (std::size_t j = 0; j < n; ++j) v[j] ^= gf4_mul(a, g[j]);
        out.push_back(v);
      }
  }
  return out;
}

inline std::size_t weight(const std::vector<unsigned>& v) {
  std::size_t w = 0;
  for (auto x : v) w += x != 0;
  return w;
}

inline double log_sum_exp(const std::vector<double>& v) {
  double m = -INFINITY;
  for (double x : v) m = std::max(m, x);
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace oracle

#endif  // QPUF_TESTS_ORACLES_HPP
