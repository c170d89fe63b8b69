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

#ifndef QPUF_DETAIL_EXPECTATION_HPP
#define QPUF_DETAIL_EXPECTATION_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qpuf {

template <class G>
double expect_one_probability(const PufModelParams& params, G g, std::span<const double> z_breaks) {
  params.validate();
  // phi(z) < 1e-300 outside this range
  constexpr double kZMax = 38.0;
  std::vector<double> knots{-kZMax, -params.lambda2, kZMax};
  for (double z : z_breaks)
    if (std::isfinite(z) && z > -kZMax && z < kZMax) knots.push_back(z);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  auto integrand = [&](double z) {
    const double x = normal_cdf((z + params.lambda2) / params.lambda1);
    return normal_pdf(z) * g(x);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, knots[i], knots[i + 1],
                                                                             15, 1e-11, &err);
    if (!std::isfinite(err)) throw std::runtime_error("expect_one_probability: quadrature failed");
  }
  return total;
}

}  // namespace qpuf

#endif  // QPUF_DETAIL_EXPECTATION_HPP
