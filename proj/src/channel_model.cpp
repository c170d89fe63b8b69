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

#include "qpuf/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "qpuf/parallel.hpp"
#include "qpuf/rng.hpp"

namespace qpuf {

TransitionMatrix::TransitionMatrix(const Rows& rows, double tol) : m_(rows) {
  for (unsigned j = 0; j < 4; ++j) {
    double sum = 0.0;
    for (unsigned k = 0; k < 4; ++k) {
      if (!(m_[j][k] >= 0.0) || !std::isfinite(m_[j][k]))
        throw std::invalid_argument("TransitionMatrix: negative or non-finite entry");
      sum += m_[j][k];
    }
    if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("TransitionMatrix: row does not sum to 1");
  }
}

TransitionMatrix TransitionMatrix::identity() {
  Rows r{};
  for (unsigned j = 0; j < 4; ++j) r[j][j] = 1.0;
  return TransitionMatrix(r);
}

TransitionMatrix TransitionMatrix::uniform() {
  Rows r;
  for (auto& row : r) row.fill(0.25);
  return TransitionMatrix(r);
}

TransitionMatrix TransitionMatrix::operator*(const TransitionMatrix& o) const {
  Rows r{};
  for (unsigned j = 0; j < 4; ++j)
    for (unsigned k = 0; k < 4; ++k)
      for (unsigned i = 0; i < 4; ++i) r[j][k] += m_[j][i] * o.m_[i][k];
  return TransitionMatrix(r, 1e-6);
}

double TransitionMatrix::max_abs_diff(const TransitionMatrix& o) const {
  double d = 0.0;
  for (unsigned j = 0; j < 4; ++j)
    for (unsigned k = 0; k < 4; ++k) d = std::max(d, std::abs(m_[j][k] - o.m_[j][k]));
  return d;
}

std::uint64_t TransitionCounts::row_total(unsigned j) const {
  std::uint64_t s = 0;
  for (auto c : n[j]) s += c;
  return s;
}

TransitionMatrix TransitionCounts::rates() const {
  TransitionMatrix::Rows r{};
  for (unsigned j = 0; j < 4; ++j) {
    const std::uint64_t total = row_total(j);
    if (total == 0) throw EmptyClassError(j);
    for (unsigned k = 0; k < 4; ++k) r[j][k] = static_cast<double>(n[j][k]) / static_cast<double>(total);
  }
  return TransitionMatrix(r);
}

ResponseDistribution TransitionCounts::input_masses() const {
  std::uint64_t all = 0;
  for (unsigned j = 0; j < 4; ++j) all += row_total(j);
  if (all == 0) throw std::runtime_error("TransitionCounts: no samples");
  ResponseDistribution d;
  for (unsigned j = 0; j < 4; ++j) d.p[j] = static_cast<double>(row_total(j)) / static_cast<double>(all);
  return d;
}

TransitionMatrix wiretap_matrix(const ResponseDistribution& d) {
  d.validate(1e-9);
  TransitionMatrix::Rows r;
  for (unsigned j = 0; j < 4; ++j)
    for (unsigned k = 0; k < 4; ++k) r[j][k] = d[j ^ k];
  return TransitionMatrix(r);
}

TransitionCounts estimate_main_counts(const PufModelParams& params, const QuantizerThresholds& t,
                                      std::uint32_t trials, std::uint64_t n_cells, std::uint64_t seed) {
  params.validate();
  t.validate();
  if (trials == 0) throw std::invalid_argument("estimate_main_counts: trials must be >= 1");
  if (n_cells == 0) throw std::invalid_argument("estimate_main_counts: n_cells must be >= 1");
  const std::uint64_t base = derive_seed(seed, stream::kChannelEstimate);
  return parallel_reduce(
      n_cells, TransitionCounts{},
      [&](std::uint64_t b, std::uint64_t e, TransitionCounts& acc) {
        for (std::uint64_t i = b; i < e; ++i) {
          Xoshiro256 rng(derive_seed(base, stream::kCells, i));
          const double z = normal_quantile(rng.uniform_open());
          const PufCell cell{normal_cdf((z + params.lambda2) / params.lambda1)};
          const auto first = evaluate(cell, trials, derive_seed(base, stream::kEnrollEval, i));
          const auto second = evaluate(cell, trials, derive_seed(base, stream::kReconstructEval, i));
          ++acc.n[quantize(first.one_frequency(), t).value()][quantize(second.one_frequency(), t).value()];
        }
      },
      [](TransitionCounts& out, const TransitionCounts& p) {
        for (unsigned j = 0; j < 4; ++j)
          for (unsigned k = 0; k < 4; ++k) out.n[j][k] += p.n[j][k];
      });
}

TransitionMatrix estimate_main_matrix(const PufModelParams& params, const QuantizerThresholds& t,
                                      std::uint32_t trials, std::uint64_t n_cells, std::uint64_t seed) {
  return estimate_main_counts(params, t, trials, n_cells, seed).rates();
}

TransitionMatrix additive_noise_channel(const TransitionMatrix& w_m, const ResponseDistribution& input) {
  input.validate(1e-9);
  std::array<double, 4> noise{};
  for (unsigned j = 0; j < 4; ++j)
    for (unsigned k = 0; k < 4; ++k) noise[j ^ k] += input[j] * w_m(j, k);
  TransitionMatrix::Rows r;
  for (unsigned j = 0; j < 4; ++j)
    for (unsigned k = 0; k < 4; ++k) r[j][k] = noise[j ^ k];
  return TransitionMatrix(r, 1e-9);
}

namespace {

// Lawson-Hanson active set: min ||A x - b|| subject to x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  constexpr double kEps = 1e-14;
  for (Eigen::Index outer = 0; outer < 3 * n; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!passive[i] && w[i] > kEps && (best < 0 || w[i] > w[best])) best = i;
    if (best < 0) break;
    passive[best] = true;
    for (Eigen::Index inner = 0; inner < 3 * n; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[i]) idx.push_back(i);
      Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
      for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
      const Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
      for (std::size_t c = 0; c < idx.size(); ++c) z[idx[c]] = zs[static_cast<Eigen::Index>(c)];
      bool feasible = true;
      for (auto i : idx) feasible = feasible && z[i] > 0.0;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (auto i : idx)
        if (z[i] <= 0.0) alpha = std::min(alpha, x[i] / (x[i] - z[i]));
      x += alpha * (z - x);
      for (auto i : idx)
        if (x[i] <= kEps) {
          x[i] = 0.0;
          passive[i] = false;
        }
    }
  }
  return x;
}

}  // namespace

std::optional<TransitionMatrix> degradation_witness(const TransitionMatrix& w_w, const TransitionMatrix& w_m,
                                                    double tol) {
  if (w_w.max_abs_diff(TransitionMatrix::uniform()) == 0.0) {
    const TransitionMatrix w3 = TransitionMatrix::uniform();
    if ((w_m * w3).max_abs_diff(w_w) <= tol) return w3;
  }
  // unknowns X[i][k] = W_3(k | i) at 4i + k; equations sum_i W_m[j][i] X[i][k] = W_w[j][k]
  // plus one row-sum equation per row of X
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(20, 16);
  Eigen::VectorXd b(20);
  for (unsigned j = 0; j < 4; ++j)
    for (unsigned k = 0; k < 4; ++k) {
      for (unsigned i = 0; i < 4; ++i) a(4 * j + k, 4 * i + k) = w_m(j, i);
      b[4 * j + k] = w_w(j, k);
    }
  for (unsigned i = 0; i < 4; ++i) {
    for (unsigned k = 0; k < 4; ++k) a(16 + i, 4 * i + k) = 1.0;
    b[16 + i] = 1.0;
  }
  const Eigen::VectorXd x = nnls(a, b);
  TransitionMatrix::Rows rows{};
  for (unsigned i = 0; i < 4; ++i) {
    double s = 0.0;
    for (unsigned k = 0; k < 4; ++k) s += x[4 * i + k];
    if (!(s > 0.0)) return std::nullopt;
    for (unsigned k = 0; k < 4; ++k) rows[i][k] = x[4 * i + k] / s;
  }
  TransitionMatrix w3(rows, 1e-9);
  if ((w_m * w3).max_abs_diff(w_w) > tol) return std::nullopt;
  return w3;
}

Gf4Vector transmit(const TransitionMatrix& w, const Gf4Vector& x, Xoshiro256& rng) {
  Gf4Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& row = w.rows()[x[i].value()];
    const double u = rng.uniform_open();
    double acc = 0.0;
    unsigned k = 0;
    for (; k < 3; ++k) {
      acc += row[k];
      if (u < acc) break;
    }
    y[i] = Gf4(k);
  }
  return y;
}

double main_channel_symbol_error(const TransitionMatrix& w_m) {
  double d = 0.0;
  for (unsigned j = 0; j < 4; ++j) d += w_m(j, j);
  return 1.0 - d / 4.0;
}

}  // namespace qpuf
