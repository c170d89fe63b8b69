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

#include "qpuf/channel_model.hpp"
#include "qpuf/parallel.hpp"

using namespace qpuf;

namespace {
const PufModelParams kSram{0.1213, 0.0210};

TransitionMatrix random_stochastic(Xoshiro256& rng, double diag_boost) {
  TransitionMatrix::Rows r{};
  for (unsigned j = 0; j < 4; ++j) {
    double s = 0.0;
    for (unsigned k = 0; k < 4; ++k) s += r[j][k] = rng.uniform_open() + (j == k ? diag_boost : 0.0);
    for (unsigned k = 0; k < 4; ++k) r[j][k] /= s;
  }
  return TransitionMatrix(r, 1e-9);
}
}  // namespace

TEST_SUITE("channel_model") {

TEST_CASE("matrix construction") {
  CHECK_THROWS(TransitionMatrix(TransitionMatrix::Rows{{{0.5, 0.5, 0.1, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}}));
  CHECK_THROWS(TransitionMatrix(TransitionMatrix::Rows{{{1.5, -0.5, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}}));
  CHECK((TransitionMatrix::identity() * TransitionMatrix::uniform()) == TransitionMatrix::uniform());
}

TEST_CASE("wiretap matrix") {
  const auto u = wiretap_matrix(ResponseDistribution::uniform());
  CHECK(u.max_abs_diff(TransitionMatrix::uniform()) == 0.0);
  CHECK(wiretap_matrix(ResponseDistribution{{1, 0, 0, 0}}) == TransitionMatrix::identity());
  const auto w = wiretap_matrix(ResponseDistribution{{0.4, 0.3, 0.2, 0.1}});
  CHECK(w(1, 0) == 0.3);
  CHECK(w(1, 1) == 0.4);
  CHECK(w(1, 2) == 0.1);
  CHECK(w(1, 3) == 0.2);
}

TEST_CASE("main channel estimation") {
  const auto t = thresholds_for_uniform(kSram);
  const auto counts = estimate_main_counts(kSram, t, 1000, 200000, 3);
  const auto w = counts.rates();
  for (unsigned j = 0; j < 4; ++j) {
    CHECK(w(j, j) > 0.9);
    double s = 0.0;
    for (unsigned k = 0; k < 4; ++k) s += w(j, k);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  }
  const double err = main_channel_symbol_error(w);
  CHECK(err > 0.0);
  CHECK(err < 0.1);
  // finite-trial masses, not the asymptotic 1/4 each
  const auto in = counts.input_masses();
  const auto want = response_masses_finite(kSram, t, 1000);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(in[k] - want[k]) <= 4 * std::sqrt(want[k] * (1 - want[k]) / 200000));

  // deterministic cells never change their response
  const PufModelParams det{1e-4, 0.0210};
  const auto dc = estimate_main_counts(det, QuantizerThresholds{0.25, 0.5, 0.75}, 1000, 20000, 3);
  std::uint64_t off = 0;
  for (unsigned j = 0; j < 4; ++j)
    for (unsigned k = 0; k < 4; ++k) off += j == k ? 0 : dc.n[j][k];
  CHECK(off == 0);
  CHECK(dc.row_total(0) + dc.row_total(3) == 20000);
  CHECK_THROWS_AS(dc.rates(), EmptyClassError);
}

TEST_CASE("estimation does not depend on the thread count") {
  const auto t = thresholds_for_uniform(kSram);
  set_max_threads(1);
  const auto a = estimate_main_counts(kSram, t, 200, 30000, 9);
  set_max_threads(3);
  const auto b = estimate_main_counts(kSram, t, 200, 30000, 9);
  set_max_threads(0);
  CHECK(a.n == b.n);
}

TEST_CASE("additive noise channel") {
  Xoshiro256 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = random_stochastic(rng, 5.0);
    ResponseDistribution in;
    double s = 0.0;
    for (auto& p : in.p) s += p = rng.uniform_open();
    for (auto& p : in.p) p /= s;
    // oracle: noise mass by explicit pair enumeration
    std::array<double, 4> e{};
    for (unsigned j = 0; j < 4; ++j)
      for (unsigned k = 0; k < 4; ++k) e[(Gf4(j) + Gf4(k)).value()] += in[j] * w(j, k);
    const auto a = additive_noise_channel(w, in);
    for (unsigned j = 0; j < 4; ++j)
      for (unsigned k = 0; k < 4; ++k) CHECK(a(j, k) == doctest::Approx(e[(Gf4(j) + Gf4(k)).value()]).epsilon(1e-14));
  }
}

TEST_CASE("degradation witness") {
  Xoshiro256 rng(8);
  const auto wm = random_stochastic(rng, 8.0);
  const auto u = degradation_witness(TransitionMatrix::uniform(), wm);
  REQUIRE(u);
  CHECK(u->max_abs_diff(TransitionMatrix::uniform()) == 0.0);

  CHECK((wm * *u).max_abs_diff(TransitionMatrix::uniform()) <= 1e-15);

  const auto same = degradation_witness(wm, wm, 1e-9);
  REQUIRE(same);
  CHECK((wm * *same).max_abs_diff(wm) <= 1e-9);
  CHECK(same->max_abs_diff(TransitionMatrix::identity()) < 1e-6);

  CHECK_FALSE(degradation_witness(TransitionMatrix::identity(), wm));

  // Wm followed by any W3 must admit a witness
  for (int t = 0; t < 20; ++t) {
    const auto w3 = random_stochastic(rng, 0.0);
    const auto ww = wm * w3;
    const auto found = degradation_witness(ww, wm, 1e-9);
    REQUIRE(found);
    CHECK((wm * *found).max_abs_diff(ww) <= 1e-9);
  }
  // a noisier Wm cannot be degraded into a cleaner channel
  CHECK_FALSE(degradation_witness(wm, wm * random_stochastic(rng, 0.5), 1e-6));
}

TEST_CASE("transmission") {
  Xoshiro256 rng(12);
  Gf4Vector x(4000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = Gf4(i % 4);
  CHECK(transmit(TransitionMatrix::identity(), x, rng) == x);
  const auto w = wiretap_matrix(ResponseDistribution{{0.7, 0.1, 0.15, 0.05}});
  std::array<double, 4> freq{};
  const int reps = 50;
  for (int r = 0; r < reps; ++r) {
    const auto y = transmit(w, x, rng);
    for (std::size_t i = 0; i < x.size(); ++i) freq[(x[i] + y[i]).value()] += 1.0 / (reps * x.size());
  }
  CHECK(std::abs(freq[0] - 0.7) < 0.01);
  CHECK(std::abs(freq[2] - 0.15) < 0.01);
  CHECK(main_channel_symbol_error(TransitionMatrix::uniform()) == doctest::Approx(0.75));
  CHECK(main_channel_symbol_error(TransitionMatrix::identity()) == 0.0);
}

}  // TEST_SUITE
