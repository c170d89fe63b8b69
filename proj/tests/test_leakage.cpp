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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "qpuf/leakage.hpp"
#include "qpuf/parallel.hpp"
#include "qpuf/polar.hpp"
#include "qpuf/rng.hpp"

using namespace qpuf;

namespace {

Gf4Vector random_vector(Xoshiro256& rng, std::size_t n) {
  Gf4Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = Gf4(rng.symbol());
  return v;
}

LinearSubcode random_subcode(Xoshiro256& rng, std::size_t n, std::size_t dim) {
  LinearSubcode c(n);
  while (c.dimension() < dim) c.add_row(random_vector(rng, n));
  return c;
}

oracle::Matrix to_matrix(const std::vector<Gf4Vector>& rows) {
  oracle::Matrix m;
  for (const auto& r : rows) {
    std::vector<unsigned> v;
    for (Gf4 s : r) v.push_back(s.value());
    m.push_back(v);
  }
  return m;
}

WeightHistogram naive_histogram(const LinearSubcode& c) {
  WeightHistogram h(c.length());
  for (const auto& w : oracle::span(to_matrix(c.generators()), c.length())) ++h.counts[oracle::weight(w)];
  return h;
}

double noise_prob(const std::vector<unsigned>& v, double p0) {
  const double q = (1 - p0) / 3;
  double p = 1.0;
  for (unsigned s : v) p *= s ? q : p0;
  return p;
}

// F_C(p0) = (1/|C|) sum_{c in C} Pr{noise = c}
double f_c_oracle(const LinearSubcode& c, double p0) {
  const auto words = oracle::span(to_matrix(c.generators()), c.length());
  double s = 0.0;
  for (const auto& w : words) s += noise_prob(w, p0);
  return s / words.size();
}

// I(s; z) from the joint law of a secret s, uniform mask m and symmetric noise
double mutual_information_oracle(const std::vector<Gf4Vector>& mask_rows, const std::vector<Gf4Vector>& secret_rows,
                                 std::size_t n, double p0) {
  const auto masks = oracle::span(to_matrix(mask_rows), n);
  const auto secrets = oracle::span(to_matrix(secret_rows), n);
  const std::size_t space = std::size_t{1} << (2 * n);
  std::vector<unsigned> z(n);
  auto decode = [&](std::size_t idx) {
    for (std::size_t i = 0; i < n; ++i) z[i] = (idx >> (2 * i)) & 3u;
  };
  std::vector<std::vector<double>> cond(secrets.size(), std::vector<double>(space, 0.0));
  std::vector<double> marg(space, 0.0);
  for (std::size_t s = 0; s < secrets.size(); ++s) {
    for (std::size_t idx = 0; idx < space; ++idx) {
      decode(idx);
      double p = 0.0;
      for (const auto& m : masks) {
        std::vector<unsigned> e(n);
        for (std::size_t i = 0; i < n; ++i) e[i] = z[i] ^ m[i] ^ secrets[s][i];
        p += noise_prob(e, p0);
      }
      cond[s][idx] = p / masks.size();
      marg[idx] += cond[s][idx] / secrets.size();
    }
  }
  double info = 0.0;
  for (std::size_t s = 0; s < secrets.size(); ++s)
    for (std::size_t idx = 0; idx < space; ++idx)
      if (cond[s][idx] > 0) info += cond[s][idx] / secrets.size() * std::log2(cond[s][idx] / marg[idx]);
  return info;
}

}  // namespace

TEST_SUITE("leakage") {

TEST_CASE("subcodes from generator rows") {
  CHECK(subcode_rows(16, std::vector<std::uint32_t>{}).dimension() == 0);
  std::vector<std::uint32_t> all(16);
  std::iota(all.begin(), all.end(), 0u);
  CHECK(subcode_rows(16, all).dimension() == 16);
  std::vector<std::uint32_t> some{255, 3, 77, 128, 0, 1, 2, 200, 31, 64, 99, 150, 12, 250, 180};
  CHECK(subcode_rows(256, some).dimension() == 15);

  Xoshiro256 rng(1);
  const auto c = random_subcode(rng, 12, 4);
  const auto g = c.generators();
  CHECK(c.contains(vec_add(vec_scale(Gf4(2), g[0]), g[3])));
  CHECK_FALSE(LinearSubcode(12).add_row(Gf4Vector(12)));
  LinearSubcode small(12, std::vector<Gf4Vector>{g[0], g[1]});
  CHECK(small.is_subcode_of(c));
  CHECK_FALSE(c.is_subcode_of(small));
}

TEST_CASE("weight histogram examples") {
  const auto zero = weight_histogram(LinearSubcode(4));
  CHECK(zero.counts == std::vector<std::uint64_t>{1, 0, 0, 0, 0});
  LinearSubcode one(4);
  one.add_row(Gf4Vector{1, 2, 3, 1});
  const auto h = weight_histogram(one);
  CHECK(h.counts == std::vector<std::uint64_t>{1, 0, 0, 0, 3});
  CHECK(h.dimension() == 1);
}

TEST_CASE("gray enumeration matches naive re-encoding") {
  Xoshiro256 rng(9);
  for (std::size_t n : {4u, 16u, 70u, 256u})
    for (std::size_t dim : {1u, 2u, 5u, 6u, 8u}) {
      if (dim > n) continue;
      const auto c = random_subcode(rng, n, dim);
      const auto want = naive_histogram(c);
      CHECK(weight_histogram(c) == want);
      // split ranges add up
      const std::uint64_t total = std::uint64_t{1} << (2 * dim);
      auto parts = weight_histogram_range(c, 0, total / 3);
      parts += weight_histogram_range(c, total / 3, total);
      CHECK(parts == want);
    }
}

TEST_CASE("histogram does not depend on the thread count") {
  Xoshiro256 rng(3);
  const auto c = random_subcode(rng, 256, 9);
  set_max_threads(1);
  const auto a = weight_histogram(c);
  set_max_threads(5);
  const auto b = weight_histogram(c);
  set_max_threads(0);
  CHECK(a == b);
}

TEST_CASE("enumeration cap") {
  Xoshiro256 rng(3);
  const auto c = random_subcode(rng, 64, 9);
  CHECK_THROWS_AS(weight_histogram(c, 8), EnumerationCapError);
  try {
    weight_histogram(c, 8);
  } catch (const EnumerationCapError& e) {
    CHECK(std::string(e.what()).find("4^9") != std::string::npos);
  }
}

TEST_CASE("F_C identities") {
  Xoshiro256 rng(21);
  for (int t = 0; t < 10; ++t) {
    const auto c = random_subcode(rng, 8, 1 + t % 4);
    const auto h = weight_histogram(c);
    CHECK(log2_f_c(h, 0.25) == doctest::Approx(-16.0).epsilon(1e-13));
    for (double p0 : {0.1, 0.3, 0.6, 0.95})
      CHECK(std::exp2(log2_f_c(h, p0)) == doctest::Approx(f_c_oracle(c, p0)).epsilon(1e-10));
  }
  const auto trivial = weight_histogram(LinearSubcode(8));
  CHECK(log2_f_c(trivial, 0.4) == doctest::Approx(8 * std::log2(0.4)).epsilon(1e-13));
}

TEST_CASE("zero-mass normalization sum") {
  Xoshiro256 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_subcode(rng, 4, t % 4);
    const double p0 = 0.25 + 0.75 * rng.uniform_open();
    CHECK(std::abs(lemma1_sum(c, p0) - 1.0) < 1e-9);
  }
}

TEST_CASE("bound examples") {
  Xoshiro256 rng(6);
  for (std::size_t n : {4u, 16u, 256u}) {
    const auto c = random_subcode(rng, n, std::min<std::size_t>(n / 2, 6));
    const auto b = leakage_bound(weight_histogram(c), 0.25);
    CHECK(b.bits == 0.0);
    CHECK(b.raw_bits == 0.0);
  }
  const auto t = leakage_bound(weight_histogram(LinearSubcode(16)), 0.3);
  CHECK(t.raw_bits == doctest::Approx(16 * std::log2(4 * 0.3)).epsilon(1e-12));
  CHECK(t.dimension == 0);
  CHECK_THROWS(leakage_bound(weight_histogram(LinearSubcode(16)), 0.2));
  CHECK(bound_applies(ResponseDistribution::symmetric(0.3)));
  CHECK_FALSE(bound_applies(ResponseDistribution{{0.3, 0.3, 0.2, 0.2}}));
  CHECK_FALSE(bound_applies(ResponseDistribution::symmetric(0.2)));
}

TEST_CASE("exact leakage against a direct mutual information oracle") {
  Xoshiro256 rng(14);
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = 4 + t % 2;
    const std::size_t r = t % 3, s = 1 + t % 2;
    LinearSubcode c1(n);
    std::vector<Gf4Vector> mask_rows, secret_rows;
    while (c1.dimension() < r) {
      auto v = random_vector(rng, n);
      if (c1.add_row(v)) mask_rows.push_back(v);
    }
    const LinearSubcode c2 = c1;
    while (c1.dimension() < r + s) {
      auto v = random_vector(rng, n);
      if (c1.add_row(v)) secret_rows.push_back(v);
    }
    const double p0 = 0.25 + 0.7 * rng.uniform_open();
    const double exact = exact_leakage(c1, c2, p0);
    CHECK(exact == doctest::Approx(mutual_information_oracle(mask_rows, secret_rows, n, p0)).epsilon(1e-9));
    CHECK(exact <= leakage_bound(weight_histogram(c2), p0).raw_bits + 1e-12);
    CHECK(std::abs(exact_leakage(c1, c2, 0.25)) < 1e-12);
  }
}

TEST_CASE("exact leakage examples") {
  // N = 4 single kernel, R = {row 3}, S = {row 2}
  const auto c2 = subcode_rows(4, std::vector<std::uint32_t>{3});
  const auto c1 = subcode_rows(4, std::vector<std::uint32_t>{3, 2});
  const double e = exact_leakage(c1, c2, 0.4);
  CHECK(e > 0.0);
  CHECK(e <= leakage_bound(weight_histogram(c2), 0.4).bits);
  CHECK(exact_leakage(c1, c1, 0.4) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS(exact_leakage(c2, c1, 0.4));
}

TEST_CASE("subcode bound terms") {
  Xoshiro256 rng(15);
  for (int t = 0; t < 30; ++t) {
    LinearSubcode c2 = random_subcode(rng, 4, t % 3);
    LinearSubcode c1 = c2;
    while (c1.dimension() < c2.dimension() + 1) c1.add_row(random_vector(rng, 4));
    const double p0 = 0.25 + 0.75 * rng.uniform_open();
    CHECK(lemma2_term(c2, p0) <= 1e-12);
    CHECK(lemma3_term(c1, c2, p0) <= leakage_bound(weight_histogram(c2), p0).raw_bits + 1e-9);
  }
}

TEST_CASE("adding mask rows never increases the bound") {
  Xoshiro256 rng(16);
  const std::size_t n = 16;
  for (int t = 0; t < 50; ++t) {
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng() % (i + 1)]);
    const std::size_t r = 1 + rng() % 6;
    const auto c2 = subcode_rows(n, std::span<const std::uint32_t>(perm.data(), r));
    const auto probe = monotonicity_probe(c2, generator_row(n, perm[r]), 0.3);
    CHECK(probe.grew);
    CHECK(probe.after <= probe.before + 1e-12);
    const auto same = monotonicity_probe(c2, c2.generators()[0], 0.3);
    CHECK_FALSE(same.grew);
    CHECK(same.after == same.before);
  }
  const auto z = monotonicity_probe(subcode_rows(n, std::vector<std::uint32_t>{1}), generator_row(n, 2), 0.25);
  CHECK(z.before == 0.0);
  CHECK(z.after == 0.0);
}

}  // TEST_SUITE
