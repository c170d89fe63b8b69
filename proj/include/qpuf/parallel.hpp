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

#ifndef QPUF_PARALLEL_HPP
#define QPUF_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

namespace qpuf {

/// Process-wide cap on worker threads for Monte Carlo loops (0 = hardware).
void set_max_threads(unsigned n);
unsigned max_threads();

/// Splits [0, n) into contiguous chunks, runs body(begin, end, acc) on each
/// with its own accumulator, then folds accumulators in chunk order. Bodies
/// must draw randomness from per-index streams so the result does not depend
/// on the thread count.
template <class Acc, class Body, class Combine>
Acc parallel_reduce(std::uint64_t n, Acc init, Body body, Combine combine) {
  const unsigned t = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, max_threads()), std::max<std::uint64_t>(n, 1)));
  std::vector<Acc> partial(t, init);
  auto run = [&](unsigned w) {
    const std::uint64_t b = n * w / t, e = n * (w + 1) / t;
    body(b, e, partial[w]);
  };
  if (t == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned w = 0; w < t; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  Acc out = init;
  for (auto& p : partial) combine(out, p);
  return out;
}

}  // namespace qpuf

#endif  // QPUF_PARALLEL_HPP
