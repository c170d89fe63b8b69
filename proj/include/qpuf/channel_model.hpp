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

#ifndef QPUF_CHANNEL_MODEL_HPP
#define QPUF_CHANNEL_MODEL_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "qpuf/gf4.hpp"
#include "qpuf/puf_model.hpp"
#include "qpuf/quantizer.hpp"
#include "qpuf/rng.hpp"

namespace qpuf {

/// 4x4 row-stochastic matrix; entry (j, k) is Pr{output k | input j}.
class TransitionMatrix {
 public:
  using Rows = std::array<std::array<double, 4>, 4>;

  TransitionMatrix() : TransitionMatrix(identity()) {}
  /// Throws std::invalid_argument unless entries are >= 0 and rows sum to 1 within `tol`.
  explicit TransitionMatrix(const Rows& rows, double tol = 1e-9);

  static TransitionMatrix identity();
  static TransitionMatrix uniform();

  double operator()(unsigned j, unsigned k) const { return m_[j][k]; }
  const Rows& rows() const { return m_; }

  /// Composition: (this * other)(j, k) = sum_i this(j, i) other(i, k).
  TransitionMatrix operator*(const TransitionMatrix& other) const;
  double max_abs_diff(const TransitionMatrix& other) const;

  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

 private:
  Rows m_{};
};

/// Joint counts of (first response, second response) over simulated cells.
struct TransitionCounts {
  std::array<std::array<std::uint64_t, 4>, 4> n{};

  std::uint64_t row_total(unsigned j) const;
  /// Empirical rates n(j,k) / n(j,*). Throws EmptyClassError if a row is empty.
  TransitionMatrix rates() const;
  /// Marginal frequencies of the first response.
  ResponseDistribution input_masses() const;
};

class EmptyClassError : public std::runtime_error {
 public:
  explicit EmptyClassError(unsigned cls)
      : std::runtime_error("no cells in input class " + std::to_string(cls) +
                           "; raise the cell count or adjust the thresholds"),
        cls_(cls) {}
  unsigned input_class() const { return cls_; }

 private:
  unsigned cls_;
};

/// Wiretap channel for helper data x + q: W_w(j, k) = p_{j+k} (GF(4) sum).
TransitionMatrix wiretap_matrix(const ResponseDistribution& d);

/// Simulates `n_cells` cells and two independent `trials`-evaluation batches
/// of each; counts (first class, second class) pairs.
TransitionCounts estimate_main_counts(const PufModelParams& params, const QuantizerThresholds& t,
                                      std::uint32_t trials, std::uint64_t n_cells, std::uint64_t seed);

TransitionMatrix estimate_main_matrix(const PufModelParams& params, const QuantizerThresholds& t,
                                      std::uint32_t trials, std::uint64_t n_cells, std::uint64_t seed);

/// Channel of the noise e = q + q' seen by reconstruction, y = x + e, when
/// q has masses `input` and q' | q follows W_m: W(j, k) = Pr{e = j + k}.
TransitionMatrix additive_noise_channel(const TransitionMatrix& w_m, const ResponseDistribution& input);

/// Finds a row-stochastic W_3 such that W_m followed by W_3 reproduces W_w,
/// i.e. ||W_m W_3 - W_w||_inf <= tol as a product of row-stochastic
/// matrices. The all-1/4 matrix is tried first when W_w is uniform.
std::optional<TransitionMatrix> degradation_witness(const TransitionMatrix& w_w, const TransitionMatrix& w_m,
                                                    double tol = 1e-6);

/// Passes every symbol of x through w independently.
Gf4Vector transmit(const TransitionMatrix& w, const Gf4Vector& x, Xoshiro256& rng);

/// 1 - mean diagonal (uniform input).
double main_channel_symbol_error(const TransitionMatrix& w_m);

}  // namespace qpuf

#endif  // QPUF_CHANNEL_MODEL_HPP
