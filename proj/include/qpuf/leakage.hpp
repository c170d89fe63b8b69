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

#ifndef QPUF_LEAKAGE_HPP
#define QPUF_LEAKAGE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpuf/gf4.hpp"
#include "qpuf/polar.hpp"
#include "qpuf/quantizer.hpp"
#include "qpuf/simd.hpp"

namespace qpuf {

/// Linear code over GF(4) held as a reduced row echelon basis.
class LinearSubcode {
 public:
  /// The trivial code {0} of the given length.
  explicit LinearSubcode(std::size_t length = 0) : n_(length) {}
  /// Span of `rows`; dependent rows are dropped.
  LinearSubcode(std::size_t length, std::span<const Gf4Vector> rows);

  std::size_t length() const { return n_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<Gf4Vector>& generators() const { return basis_; }

  bool contains(const Gf4Vector& v) const;
  bool is_subcode_of(const LinearSubcode& other) const;
  /// Span of this code and v. Returns false (and leaves the code unchanged) if v is already in it.
  bool add_row(const Gf4Vector& v);

 private:
  Gf4Vector reduce(Gf4Vector v) const;

  std::size_t n_;
  std::vector<Gf4Vector> basis_;
  std::vector<std::size_t> pivots_;
};

/// Span of the generator rows of the length-n polar code at `indices`.
LinearSubcode subcode_rows(std::size_t n, std::span<const std::uint32_t> indices);
LinearSubcode subcode_rows(const CodeConstruction& c, std::span<const std::uint32_t> indices);

struct WeightHistogram {
  std::vector<std::uint64_t> counts;  // counts[w], w = 0..N

  WeightHistogram() = default;
  explicit WeightHistogram(std::size_t length) : counts(length + 1, 0) {}

  std::size_t length() const { return counts.empty() ? 0 : counts.size() - 1; }
  std::uint64_t total() const;
  /// log_4(total); throws std::logic_error if total is not a power of 4.
  std::size_t dimension() const;
  WeightHistogram& operator+=(const WeightHistogram& o);
  friend bool operator==(const WeightHistogram&, const WeightHistogram&) = default;
};

inline constexpr unsigned kDefaultEnumerationCap = 16;

class EnumerationCapError : public std::runtime_error {
 public:
  EnumerationCapError(std::size_t dimension, unsigned cap);
};

/// Rows of c with all four scalar multiples in bit-plane form.
simd::PackedRowMultiples pack_row_multiples(const LinearSubcode& c);

/// Histogram contribution of Gray-code counter values [begin, end) of the
/// enumeration of c. Ranges can be evaluated independently and added.
WeightHistogram weight_histogram_range(const LinearSubcode& c, std::uint64_t begin, std::uint64_t end);

/// Full weight distribution of c. Throws EnumerationCapError if dimension > cap.
WeightHistogram weight_histogram(const LinearSubcode& c, unsigned cap = kDefaultEnumerationCap);

/// log2 F_C(p0), F_C(p0) = |C|^-1 sum_v p0^(N - w(v)) ((1 - p0)/3)^w(v), for p0 in (0, 1].
double log2_f_c(const WeightHistogram& h, double p0);

struct LeakageBound {
  double bits = 0.0;      // max(raw_bits, 0)
  double raw_bits = 0.0;  // 2N + log2 F_C2(p0)
  double p0 = 0.0;
  std::size_t length = 0;
  std::size_t dimension = 0;
};

/// Upper bound on I(s; z) in bits. Throws std::invalid_argument unless 1/4 <= p0 <= 1.
LeakageBound leakage_bound(const WeightHistogram& c2, double p0);

/// True if p1 = p2 = p3 within tol and p0 >= 1/4, i.e. the bound applies.
bool bound_applies(const ResponseDistribution& d, double tol = 1e-12);

// Exhaustive oracles over all 4^N channel outputs; N <= kExactLengthCap.

inline constexpr std::size_t kExactLengthCap = 8;

/// Sum over z of F_{z-C}(p0).
double lemma1_sum(const LinearSubcode& c, double p0);
/// Sum over z of F_{z-C2} log2(F_{z-C2} / F_{C2}).
double lemma2_term(const LinearSubcode& c2, double p0);
/// Sum over z of F_{z-C1} log2(F_{C2} / F_{z-C1}).
double lemma3_term(const LinearSubcode& c1, const LinearSubcode& c2, double p0);
/// I(s; z) = H(z) - H(z | s). Throws std::invalid_argument unless C2 is a subcode of C1.
double exact_leakage(const LinearSubcode& c1, const LinearSubcode& c2, double p0);

struct MonotonicityProbe {
  double before = 0.0;
  double after = 0.0;
  bool grew = false;  // false if the row was already in C2
};

/// Raw bounds for C2 and span(C2, row) at p0.
MonotonicityProbe monotonicity_probe(const LinearSubcode& c2, const Gf4Vector& row, double p0,
                                     unsigned cap = kDefaultEnumerationCap);

}  // namespace qpuf

#endif  // QPUF_LEAKAGE_HPP
