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

#include "qpuf/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ranges>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace qpuf {

void QuantizerThresholds::validate() const {
  if (!(0.0 < a && a < b && b < c && c < 1.0))
    throw std::invalid_argument("QuantizerThresholds: require 0 < a < b < c < 1");
}

void ResponseDistribution::validate(double tol) const {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("ResponseDistribution: mass outside [0,1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("ResponseDistribution: masses do not sum to 1");
}

ResponseDistribution ResponseDistribution::symmetric(double p0) {
  const double q = (1.0 - p0) / 3.0;
  ResponseDistribution d{{p0, q, q, q}};
  d.validate(1e-12);
  return d;
}

Gf4 quantize(double f, const QuantizerThresholds& t) {
  if (f < t.a) return Gf4(0);
  if (f < t.b) return Gf4(1);
  if (f < t.c) return Gf4(2);
  return Gf4(3);
}

Gf4Vector quantize_counts(std::span<const std::uint32_t> ones, std::uint32_t trials, const QuantizerThresholds& t) {
  if (trials == 0) throw std::invalid_argument("quantize_counts: trials must be >= 1");
  Gf4Vector q(ones.size());
  for (std::size_t i = 0; i < ones.size(); ++i) q[i] = quantize(static_cast<double>(ones[i]) / trials, t);
  return q;
}

QuantizerThresholds thresholds_for_uniform(const PufModelParams& params) {
  return thresholds_for_masses(params, ResponseDistribution::uniform());
}

QuantizerThresholds thresholds_for_masses(const PufModelParams& params, const ResponseDistribution& target) {
  target.validate(1e-9);
  const double c0 = target[0], c1 = c0 + target[1], c2 = c1 + target[2];
  QuantizerThresholds t{inv_cdf(c0, params), inv_cdf(c1, params), inv_cdf(c2, params)};
  t.validate();
  return t;
}

ResponseDistribution response_masses_asymptotic(const PufModelParams& params, const QuantizerThresholds& t) {
  t.validate();
  const double fa = cdf_one_probability(t.a, params);
  const double fb = cdf_one_probability(t.b, params);
  const double fc = cdf_one_probability(t.c, params);
  return ResponseDistribution{{fa, fb - fa, fc - fb, 1.0 - fc}};
}

ResponseDistribution response_masses_finite(const PufModelParams& params, const QuantizerThresholds& t,
                                            std::uint32_t trials) {
  t.validate();
  if (trials == 0) throw std::invalid_argument("response_masses_finite: trials must be >= 1");
  const std::int64_t n = trials;

  // first ones-count that lands in class >= k, consistent with quantize()
  auto first_count_at_least = [&](unsigned k) {
    auto counts = std::views::iota(std::int64_t{0}, n + 1);
    auto it = std::ranges::partition_point(
        counts, [&](std::int64_t m) { return quantize(static_cast<double>(m) / n, t).value() < k; });
    return it == counts.end() ? n + 1 : *it;
  };

  // survival S(m) = Pr{Binomial(n, x) >= m}
  auto survival = [n](std::int64_t m, double x) -> double {
    if (m <= 0) return 1.0;
    if (m > n) return 0.0;
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(static_cast<double>(m), static_cast<double>(n - m + 1), x);
  };

  std::array<double, 5> tail{1.0, 0.0, 0.0, 0.0, 0.0};
  for (unsigned k = 1; k <= 3; ++k) {
    const std::int64_t m = first_count_at_least(k);
    std::vector<double> breaks;
    for (double off : {-4.0, -2.0, 0.0, 2.0, 4.0}) {
      const double x = (static_cast<double>(m) + off * std::sqrt(std::max<double>(1.0, m))) / n;
      if (x > 0.0 && x < 1.0) breaks.push_back(params.lambda1 * normal_quantile(x) - params.lambda2);
    }
    tail[k] = expect_one_probability(params, [&](double x) { return survival(m, x); }, breaks);
  }
  ResponseDistribution d;
  for (unsigned k = 0; k < 4; ++k) d.p[k] = std::clamp(tail[k] - tail[k + 1], 0.0, 1.0);
  return d;
}

double response_entropy(const ResponseDistribution& d) {
  double h = 0.0;
  for (double x : d.p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

}  // namespace qpuf
