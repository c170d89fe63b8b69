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

#include "qpuf/puf_model.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/erf.hpp>

#include "qpuf/rng.hpp"

namespace qpuf {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
  // erfc_inv keeps full relative precision in the lower tail; mirror the upper one
  if (p > 0.5) return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

void PufModelParams::validate() const {
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) throw std::invalid_argument("PufModelParams: lambda1 must be > 0");
  if (!std::isfinite(lambda2)) throw std::invalid_argument("PufModelParams: lambda2 must be finite");
}

namespace {
void require_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error(std::string(what) + ": argument outside (0,1)");
}
}  // namespace

double cdf_one_probability(double x, const PufModelParams& params) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("cdf_one_probability: argument outside [0,1]");
  params.validate();
  // sampled one-probabilities can round to exactly 0 or 1
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  return normal_cdf(params.lambda1 * normal_quantile(x) - params.lambda2);
}

double pdf_one_probability(double x, const PufModelParams& params) {
  require_open_unit(x, "pdf_one_probability");
  params.validate();
  const double u = normal_quantile(x);
  const double d = params.lambda2 - params.lambda1 * u;
  // ratio of normal densities in log space so the tails do not overflow
  return params.lambda1 * std::exp(0.5 * (u * u - d * d));
}

double inv_cdf(double p, const PufModelParams& params) {
  require_open_unit(p, "inv_cdf");
  params.validate();
  return normal_cdf((normal_quantile(p) + params.lambda2) / params.lambda1);
}

double inv_cdf_bisect(double p, const PufModelParams& params, double tol, int max_iter) {
  require_open_unit(p, "inv_cdf_bisect");
  params.validate();
  // bisect on the latent axis: x = Phi(t), F(x) = Phi(lambda1 t - lambda2) is increasing in t
  double lo = -40.0, hi = 40.0;
  auto g = [&](double t) { return normal_cdf(params.lambda1 * t - params.lambda2) - p; };
  if (g(lo) > 0.0 || g(hi) < 0.0) throw ConvergenceError("inv_cdf_bisect: root not bracketed", lo, hi);
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return normal_cdf(mid);  // interval is down to adjacent doubles
    (g(mid) < 0.0 ? lo : hi) = mid;
    if (hi - lo < tol) return normal_cdf(0.5 * (lo + hi));
  }
  throw ConvergenceError("inv_cdf_bisect: no convergence", lo, hi);
}

std::vector<PufCell> sample_cells(const PufModelParams& params, std::size_t count, std::uint64_t seed) {
  params.validate();
  if (count == 0) throw std::invalid_argument("sample_cells: count must be >= 1");
  std::vector<PufCell> cells(count);
  for (std::size_t i = 0; i < count; ++i) {
    Xoshiro256 rng(derive_seed(seed, stream::kCells, i));
    const double z = normal_quantile(rng.uniform_open());
    cells[i].one_probability = normal_cdf((z + params.lambda2) / params.lambda1);
  }
  return cells;
}

EvaluationRecord evaluate(const PufCell& cell, std::uint32_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("evaluate: trials must be >= 1");
  const double p = cell.one_probability;
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("evaluate: one_probability outside [0,1]");
  EvaluationRecord rec{trials, 0};
  if (p == 0.0) return rec;
  if (p == 1.0) {
    rec.ones = trials;
    return rec;
  }
  Xoshiro256 rng(seed);
  std::binomial_distribution<std::uint32_t> dist(trials, p);
  rec.ones = dist(rng);
  return rec;
}

std::vector<std::uint32_t> evaluate_array(std::span<const PufCell> cells, std::uint32_t trials, std::uint64_t seed,
                                          std::uint64_t domain) {
  std::vector<std::uint32_t> ones(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) ones[i] = evaluate(cells[i], trials, derive_seed(seed, domain, i)).ones;
  return ones;
}

double expected_aber(const PufModelParams& params, AberReference ref) {
  if (ref == AberReference::kMajority)
    return expect_one_probability(params, [](double x) { return std::min(x, 1.0 - x); });
  return expect_one_probability(params, [](double x) { return 2.0 * x * (1.0 - x); });
}

}  // namespace qpuf
