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

#ifndef QPUF_QUANTIZER_HPP
#define QPUF_QUANTIZER_HPP

#include <array>
#include <cstdint>
#include <span>

#include "qpuf/gf4.hpp"
#include "qpuf/puf_model.hpp"

namespace qpuf {

/// Class boundaries on the one-frequency axis: [0,a), [a,b), [b,c), [c,1].
struct QuantizerThresholds {
  double a = 0.25, b = 0.5, c = 0.75;

  void validate() const;
  friend bool operator==(const QuantizerThresholds&, const QuantizerThresholds&) = default;
};

/// Probability masses p0..p3 of the quaternary response.
struct ResponseDistribution {
  std::array<double, 4> p{0.25, 0.25, 0.25, 0.25};

  double operator[](std::size_t i) const { return p[i]; }
  void validate(double tol = 1e-12) const;

  static ResponseDistribution uniform() { return {}; }
  /// p0 and p1 = p2 = p3 = (1 - p0) / 3.
  static ResponseDistribution symmetric(double p0);
};

Gf4 quantize(double one_frequency, const QuantizerThresholds& t);

/// Quantizes ones-counts (f = ones / trials) cell by cell.
Gf4Vector quantize_counts(std::span<const std::uint32_t> ones, std::uint32_t trials, const QuantizerThresholds& t);

/// Quartiles of the one-probability distribution.
QuantizerThresholds thresholds_for_uniform(const PufModelParams& params);

/// Thresholds whose asymptotic masses equal `target` (a = F^-1(p0), ...).
QuantizerThresholds thresholds_for_masses(const PufModelParams& params, const ResponseDistribution& target);

/// Masses in the limit of infinitely many trials.
ResponseDistribution response_masses_asymptotic(const PufModelParams& params, const QuantizerThresholds& t);

/// Masses for one-frequencies measured over `trials` evaluations: the
/// binomial class probabilities mixed over the one-probability density.
ResponseDistribution response_masses_finite(const PufModelParams& params, const QuantizerThresholds& t,
                                            std::uint32_t trials);

/// Shannon entropy in bits; 0 log 0 = 0.
double response_entropy(const ResponseDistribution& d);

}  // namespace qpuf

#endif  // QPUF_QUANTIZER_HPP
