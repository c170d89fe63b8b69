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

#ifndef QPUF_PUF_MODEL_HPP
#define QPUF_PUF_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpuf {

// Standard normal helpers.
double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double p);

/// Parameters of the one-probability distribution
/// F(x) = Phi(lambda1 * Phi^-1(x) - lambda2). Defaults are the SRAM fit.
struct PufModelParams {
  double lambda1 = 0.1213;
  double lambda2 = 0.0210;

  void validate() const;
  friend bool operator==(const PufModelParams&, const PufModelParams&) = default;
};

struct PufCell {
  double one_probability = 0.5;
};

/// Ones counted over `trials` evaluations of one cell.
struct EvaluationRecord {
  std::uint32_t trials = 0;
  std::uint32_t ones = 0;

  double one_frequency() const { return static_cast<double>(ones) / trials; }
};

/// Raised by the bisection cross-check when it cannot bracket or converge.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_, hi_;
};

double cdf_one_probability(double x, const PufModelParams& params);
double pdf_one_probability(double x, const PufModelParams& params);

/// Closed-form inverse: Phi((Phi^-1(p) + lambda2) / lambda1).
double inv_cdf(double p, const PufModelParams& params);

/// Bisection on F; kept as an independent cross-check of inv_cdf.
double inv_cdf_bisect(double p, const PufModelParams& params, double tol = 1e-15, int max_iter = 400);

/// Inverse-CDF sampling: cell i gets Phi((Z_i + lambda2) / lambda1) with
/// Z_i = Phi^-1(U_i) and U_i drawn from stream (seed, cells, i).
std::vector<PufCell> sample_cells(const PufModelParams& params, std::size_t count, std::uint64_t seed);

/// Binomial(trials, p) ones-count from a single seeded stream.
EvaluationRecord evaluate(const PufCell& cell, std::uint32_t trials, std::uint64_t seed);

/// Evaluates every cell of an array; cell i uses stream (seed, domain, i).
std::vector<std::uint32_t> evaluate_array(std::span<const PufCell> cells, std::uint32_t trials,
                                          std::uint64_t seed, std::uint64_t domain);

enum class AberReference {
  kMajority,  ///< one evaluation against the cell's most likely value: E[min(x, 1-x)]
  kPairwise,  ///< two independent evaluations disagree: E[2x(1-x)]
};

/// Average bit error rate of the cell population by quadrature.
double expected_aber(const PufModelParams& params, AberReference ref = AberReference::kMajority);

/// E[g(X)] for X with CDF F, integrated over the latent normal axis
/// (X = Phi((Z + lambda2) / lambda1)) with breakpoints in z.
template <class G>
double expect_one_probability(const PufModelParams& params, G g, std::span<const double> z_breaks = {});

}  // namespace qpuf

#include "qpuf/detail/expectation.hpp"

#endif  // QPUF_PUF_MODEL_HPP
