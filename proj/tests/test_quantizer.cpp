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

#include <array>
#include <cmath>
#include <random>

#include "qpuf/quantizer.hpp"

using namespace qpuf;

namespace {
const PufModelParams kSram{0.1213, 0.0210};
const PufModelParams kUniform{1.0, 0.0};
}  // namespace

TEST_SUITE("quantizer") {

TEST_CASE("interval membership") {
  const QuantizerThresholds t{0.2, 0.5, 0.8};
  CHECK(quantize(0.3, t) == Gf4(1));
  CHECK(quantize(0.0, t) == Gf4(0));
  CHECK(quantize(1.0, t) == Gf4(3));
  CHECK(quantize(0.8, t) == Gf4(3));
  CHECK(quantize(0.2, t) == Gf4(1));
  CHECK(quantize(0.5, t) == Gf4(2));
  const std::array<std::uint32_t, 4> ones{0, 30, 70, 100};
  CHECK(quantize_counts(ones, 100, t) == Gf4Vector{0, 1, 2, 3});
  CHECK_THROWS(QuantizerThresholds{0.5, 0.4, 0.8}.validate());
  CHECK_THROWS(QuantizerThresholds{0.0, 0.4, 0.8}.validate());
}

TEST_CASE("uniform thresholds") {
  const auto s = thresholds_for_uniform(kSram);
  CHECK(s.a == doctest::Approx(3.6e-8).epsilon(0.05));
  CHECK(s.b == doctest::Approx(0.5687).epsilon(1e-4));
  CHECK(1.0 - s.c == doctest::Approx(4.9e-9).epsilon(0.05));
  const auto u = thresholds_for_uniform(kUniform);
  CHECK(u.a == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(u.b == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(u.c == doctest::Approx(0.75).epsilon(1e-12));
  const auto m = response_masses_asymptotic(kSram, s);
  for (double x : m.p) CHECK(x == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("biased thresholds hit their targets") {
  for (double p0 : {0.265, 0.28, 0.4}) {
    const auto d = ResponseDistribution::symmetric(p0);
    const auto m = response_masses_asymptotic(kSram, thresholds_for_masses(kSram, d));
    // thresholds close to 1 resolve the cdf only to a few ulps of 1 - x
    for (int k = 0; k < 4; ++k) CHECK(m[k] == doctest::Approx(d[k]).epsilon(1e-6));
  }
}

TEST_CASE("asymptotic masses") {
  const auto m = response_masses_asymptotic(kSram, QuantizerThresholds{0.5687, 0.99, 0.999});
  CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(m[1] + m[2] + m[3] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(m[1] == doctest::Approx(cdf_one_probability(0.99, kSram) - cdf_one_probability(0.5687, kSram)).epsilon(1e-12));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 50; ++i) {
    std::array<double, 3> x{u(rng), u(rng), u(rng)};
    std::sort(x.begin(), x.end());
    if (x[0] == x[1] || x[1] == x[2]) continue;
    const auto d = response_masses_asymptotic(kSram, {x[0], x[1], x[2]});
    CHECK(d[0] + d[1] + d[2] + d[3] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("finite-trial masses") {
  // converges to the asymptotic masses as trials grow
  const PufModelParams smooth{0.7, 0.1};
  const auto t = thresholds_for_uniform(smooth);
  const auto asym = response_masses_asymptotic(smooth, t);
  const auto fin = response_masses_finite(smooth, t, 10000);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(fin[k] - asym[k]) < 0.005);

  // a single trial only reaches the classes of f = 0 and f = 1
  const auto one = response_masses_finite(kUniform, thresholds_for_uniform(kUniform), 1);
  CHECK(one[1] == 0.0);
  CHECK(one[2] == 0.0);
  CHECK(one[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(one[0] + one[1] + one[2] + one[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("finite-trial masses match simulation") {
  const std::uint32_t trials = 1000;
  const std::size_t n = 1000000;
  const auto t = thresholds_for_uniform(kSram);
  const auto want = response_masses_finite(kSram, t, trials);
  const auto cells = sample_cells(kSram, n, 77);
  const auto ones = evaluate_array(cells, trials, 78, 1);
  const auto q = quantize_counts(ones, trials, t);
  std::array<double, 4> freq{};
  for (Gf4 s : q) freq[s.value()] += 1.0 / n;
  for (int k = 0; k < 4; ++k) {
    const double se = std::sqrt(want[k] * (1 - want[k]) / n);
    CHECK(std::abs(freq[k] - want[k]) <= 3 * se);
  }
}

TEST_CASE("entropy") {
  CHECK(response_entropy(ResponseDistribution::uniform()) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(response_entropy(ResponseDistribution{{1, 0, 0, 0}}) == 0.0);
  const std::array<std::pair<double, double>, 6> rows{{
      {0.265, 1.9991}, {0.268, 1.9988}, {0.271, 1.9983}, {0.274, 1.9978}, {0.277, 1.9973}, {0.28, 1.9966}}};
  for (auto [p0, h] : rows) CHECK(std::abs(response_entropy(ResponseDistribution::symmetric(p0)) - h) <= 1e-4);
}

}  // TEST_SUITE
