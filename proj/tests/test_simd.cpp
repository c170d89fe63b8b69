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

#include <doctest.h>

#include <cstring>
#include <vector>

#include "qpuf/leakage.hpp"
#include "qpuf/polar.hpp"
#include "qpuf/rng.hpp"
#include "qpuf/simd.hpp"

using namespace qpuf;

namespace {

simd::KernelTables rs4_tables() {
  std::array<std::array<std::uint8_t, 4>, 4> g{};
  for (unsigned i = 0; i < 4; ++i)
    for (unsigned j = 0; j < 4; ++j) g[i][j] = static_cast<std::uint8_t>(Kernel::rs4()(i, j).value());
  return simd::KernelTables::build(g);
}

LinearSubcode random_subcode(Xoshiro256& rng, std::size_t n, std::size_t dim) {
  LinearSubcode c(n);
  while (c.dimension() < dim) {
    Gf4Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Gf4(rng.symbol());
    c.add_row(v);
  }
  return c;
}

struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::set_active_isa(saved); }
};

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("isa selection") {
  CHECK(simd::isa_supported(simd::Isa::kScalar));
  CHECK(simd::kernels_for(simd::Isa::kScalar).isa == simd::Isa::kScalar);
  IsaGuard guard;
  simd::set_active_isa(simd::Isa::kScalar);
  CHECK(simd::kernels().isa == simd::Isa::kScalar);
  if (!simd::isa_supported(simd::Isa::kAvx2)) CHECK_THROWS(simd::set_active_isa(simd::Isa::kAvx2));
}

TEST_CASE("kernel update variants are bit-identical") {
  if (!simd::isa_supported(simd::Isa::kAvx2)) {
    MESSAGE("AVX2 not available; skipped");
    return;
  }
  const auto tables = rs4_tables();
  const auto& sc = simd::kernels_for(simd::Isa::kScalar);
  const auto& vx = simd::kernels_for(simd::Isa::kAvx2);
  Xoshiro256 rng(31);
  for (std::size_t m : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 16u, 64u}) {
    for (unsigned k = 0; k < 4; ++k) {
      for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> parent(16 * m);
        for (auto& x : parent) {
          const unsigned kind = rng.symbol();
          x = kind == 0 ? 0.0 : kind == 1 ? 500.0 : 40.0 * (2 * rng.uniform_open() - 1);
        }
        std::vector<std::uint8_t> decided(4 * m);
        for (auto& d : decided) d = static_cast<std::uint8_t>(rng.symbol());
        std::vector<double> a(4 * m, 1.0), b(4 * m, 2.0);
        sc.kernel_update(tables, k, parent.data(), decided.data(), m, a.data());
        vx.kernel_update(tables, k, parent.data(), decided.data(), m, b.data());
        CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
      }
    }
  }
}

TEST_CASE("gray enumeration variants agree") {
  if (!simd::isa_supported(simd::Isa::kAvx2)) {
    MESSAGE("AVX2 not available; skipped");
    return;
  }
  const auto& sc = simd::kernels_for(simd::Isa::kScalar);
  const auto& vx = simd::kernels_for(simd::Isa::kAvx2);
  Xoshiro256 rng(4);
  for (std::size_t n : {4u, 16u, 63u, 64u, 200u, 256u, 300u}) {
    for (std::size_t dim : {1u, 3u, 6u}) {
      if (dim > n) continue;
      const auto c = random_subcode(rng, n, dim);
      const auto rows = pack_row_multiples(c);
      const std::uint64_t total = std::uint64_t{1} << (2 * dim);
      for (auto [b, e] : {std::pair<std::uint64_t, std::uint64_t>{0, total}, {1, total}, {3, total - 2}, {5, 6}}) {
        if (b >= e) continue;
        std::vector<std::uint64_t> ha(n + 1, 0), hb(n + 1, 0);
        sc.gray_enumerate(rows, b, e, ha.data());
        vx.gray_enumerate(rows, b, e, hb.data());
        CHECK(ha == hb);
      }
    }
  }
}

TEST_CASE("decoder output is identical under both variants") {
  if (!simd::isa_supported(simd::Isa::kAvx2)) {
    MESSAGE("AVX2 not available; skipped");
    return;
  }
  IsaGuard guard;
  const auto w = wiretap_matrix(ResponseDistribution{{0.8, 0.1, 0.06, 0.04}});
  const std::size_t n = 256;
  Xoshiro256 rng(77);
  FrozenSymbols frozen(n, Gf4(0));
  for (std::size_t i = 0; i < 80; ++i) frozen[n - 1 - 3 * i].reset();
  for (int t = 0; t < 20; ++t) {
    Gf4Vector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = Gf4(rng.symbol());
    const auto llrs = channel_llrs(y, w);
    simd::set_active_isa(simd::Isa::kScalar);
    const auto a = scl_decode(llrs, frozen, DecoderConfig{4, kDefaultLlrClamp});
    simd::set_active_isa(simd::Isa::kAvx2);
    const auto b = scl_decode(llrs, frozen, DecoderConfig{4, kDefaultLlrClamp});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].u == b[i].u);
      CHECK(a[i].metric == b[i].metric);
    }
  }
}

}  // TEST_SUITE
