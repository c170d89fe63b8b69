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

#include "qpuf/leakage.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "qpuf/parallel.hpp"

namespace qpuf {

LinearSubcode::LinearSubcode(std::size_t length, std::span<const Gf4Vector> rows) : n_(length) {
  for (const auto& r : rows) add_row(r);
}

Gf4Vector LinearSubcode::reduce(Gf4Vector v) const {
  if (v.size() != n_) throw std::invalid_argument("LinearSubcode: row length mismatch");
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const Gf4 f = v[pivots_[k]];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < n_; ++j) v[j] += f * basis_[k][j];
  }
  return v;
}

bool LinearSubcode::contains(const Gf4Vector& v) const { return hamming_weight(reduce(v)) == 0; }

bool LinearSubcode::is_subcode_of(const LinearSubcode& other) const {
  if (other.n_ != n_) return false;
  for (const auto& g : basis_)
    if (!other.contains(g)) return false;
  return true;
}

bool LinearSubcode::add_row(const Gf4Vector& v) {
  Gf4Vector r = reduce(v);
  std::size_t p = 0;
  while (p < n_ && r[p].is_zero()) ++p;
  if (p == n_) return false;
  const Gf4 inv = r[p].inverse();
  for (std::size_t j = 0; j < n_; ++j) r[j] = r[j] * inv;
  // keep the basis fully reduced so every pivot column is a unit column
  for (auto& b : basis_) {
    const Gf4 f = b[p];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < n_; ++j) b[j] += f * r[j];
  }
  basis_.push_back(std::move(r));
  pivots_.push_back(p);
  return true;
}

LinearSubcode subcode_rows(std::size_t n, std::span<const std::uint32_t> indices) {
  std::vector<Gf4Vector> rows;
  rows.reserve(indices.size());
  for (auto i : indices) rows.push_back(generator_row(n, i));
  return LinearSubcode(n, rows);
}

LinearSubcode subcode_rows(const CodeConstruction& c, std::span<const std::uint32_t> indices) {
  return subcode_rows(c.block_length, indices);
}

std::uint64_t WeightHistogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::size_t WeightHistogram::dimension() const {
  const std::uint64_t t = total();
  if (t == 0 || !std::has_single_bit(t) || std::countr_zero(t) % 2 != 0)
    throw std::logic_error("weight histogram total is not a power of 4");
  return static_cast<std::size_t>(std::countr_zero(t) / 2);
}

WeightHistogram& WeightHistogram::operator+=(const WeightHistogram& o) {
  if (o.counts.size() != counts.size()) throw std::invalid_argument("histogram length mismatch");
  for (std::size_t w = 0; w < counts.size(); ++w) counts[w] += o.counts[w];
  return *this;
}

namespace {

std::string cap_message(std::size_t dimension, unsigned cap) {
  std::ostringstream os;
  const double steps = std::pow(4.0, static_cast<double>(dimension));
  os << "subcode dimension " << dimension << " exceeds enumeration cap " << cap << ": needs 4^" << dimension
     << " = " << steps << " codewords, roughly " << steps / 5e8 << " s on one core";
  return os.str();
}

}  // namespace

EnumerationCapError::EnumerationCapError(std::size_t dimension, unsigned cap)
    : std::runtime_error(cap_message(dimension, cap)) {}

simd::PackedRowMultiples pack_row_multiples(const LinearSubcode& c) {
  simd::PackedRowMultiples rows;
  rows.dim = c.dimension();
  rows.length = c.length();
  rows.words = ((c.length() + 63) / 64 + 3) & ~std::size_t{3};
  rows.data.assign(rows.dim * 4 * 2 * rows.words, 0);
  for (std::size_t j = 0; j < rows.dim; ++j) {
    const PackedGf4Vector g(c.generators()[j]);
    for (unsigned m = 0; m < 4; ++m) {
      const PackedGf4Vector s = g.scaled(Gf4(m));
      auto* lo = rows.data.data() + ((j * 4 + m) * 2 + 0) * rows.words;
      auto* hi = rows.data.data() + ((j * 4 + m) * 2 + 1) * rows.words;
      for (std::size_t w = 0; w < s.words(); ++w) {
        lo[w] = s.lo()[w];
        hi[w] = s.hi()[w];
      }
    }
  }
  return rows;
}

WeightHistogram weight_histogram_range(const LinearSubcode& c, std::uint64_t begin, std::uint64_t end) {
  if (c.dimension() > 31) throw EnumerationCapError(c.dimension(), 31);
  const std::uint64_t total = std::uint64_t{1} << (2 * c.dimension());
  if (begin > end || end > total) throw std::out_of_range("enumeration range outside 0..4^dimension");
  WeightHistogram h(c.length());
  const auto rows = pack_row_multiples(c);
  simd::kernels().gray_enumerate(rows, begin, end, h.counts.data());
  return h;
}

WeightHistogram weight_histogram(const LinearSubcode& c, unsigned cap) {
  if (c.dimension() > cap || c.dimension() > 31) throw EnumerationCapError(c.dimension(), cap);
  const std::uint64_t total = std::uint64_t{1} << (2 * c.dimension());
  const auto rows = pack_row_multiples(c);
  const auto& kern = simd::kernels();
  return parallel_reduce(
      total, WeightHistogram(c.length()),
      [&](std::uint64_t b, std::uint64_t e, WeightHistogram& acc) { kern.gray_enumerate(rows, b, e, acc.counts.data()); },
      [](WeightHistogram& out, const WeightHistogram& p) { out += p; });
}

double log2_f_c(const WeightHistogram& h, double p0) {
  if (!(p0 > 0.0 && p0 <= 1.0)) throw std::invalid_argument("log2_f_c: p0 must be in (0, 1]");
  const std::size_t n = h.length();
  const double q = (1.0 - p0) / 3.0;
  const double total = static_cast<double>(h.total());
  // F_C = p0^N A(rho) / |C| with A(rho) = sum_w n_w rho^w and rho = q / p0
  const double rho = q / p0;
  double log2_a;
  if (rho <= 1.0) {
    double a = 0.0;
    for (std::size_t w = 0; w <= n; ++w)
      if (h.counts[w]) a += static_cast<double>(h.counts[w]) * std::pow(rho, static_cast<double>(w));
    log2_a = std::log2(a);
  } else {
    const double lr = std::log2(rho);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w <= n; ++w)
      if (h.counts[w]) mx = std::max(mx, std::log2(static_cast<double>(h.counts[w])) + lr * static_cast<double>(w));
    double s = 0.0;
    for (std::size_t w = 0; w <= n; ++w)
      if (h.counts[w]) s += std::exp2(std::log2(static_cast<double>(h.counts[w])) + lr * static_cast<double>(w) - mx);
    log2_a = mx + std::log2(s);
  }
  return static_cast<double>(n) * std::log2(p0) + (log2_a - std::log2(total));
}

LeakageBound leakage_bound(const WeightHistogram& c2, double p0) {
  if (!(p0 >= 0.25 && p0 <= 1.0)) throw std::invalid_argument("leakage bound requires 1/4 <= p0 <= 1");
  LeakageBound b;
  b.p0 = p0;
  b.length = c2.length();
  b.dimension = c2.dimension();
  const double n = static_cast<double>(b.length);
  const double q = (1.0 - p0) / 3.0;
  const double rho = q / p0;
  double a = 0.0;
  for (std::size_t w = 0; w <= b.length; ++w)
    if (c2.counts[w]) a += static_cast<double>(c2.counts[w]) * std::pow(rho, static_cast<double>(w));
  // grouped so that p0 = 1/4 (rho = 1, A = |C|) gives exactly zero
  b.raw_bits = (2.0 * n + n * std::log2(p0)) + (std::log2(a) - std::log2(static_cast<double>(c2.total())));
  b.bits = std::max(b.raw_bits, 0.0);
  return b;
}

bool bound_applies(const ResponseDistribution& d, double tol) {
  return d[0] >= 0.25 - tol && std::abs(d[1] - d[2]) <= tol && std::abs(d[2] - d[3]) <= tol &&
         std::abs(d[1] - d[3]) <= tol;
}

namespace {

// Words over GF(4) of length <= 8 packed 2 bits per symbol.
struct SmallSpace {
  std::size_t n;
  std::uint32_t size;
  std::vector<double> prob;  // prob of noise word v
};

unsigned small_weight(std::uint32_t v) {
  return static_cast<unsigned>(std::popcount((v | (v >> 1)) & 0x5555u));
}

std::uint32_t pack_small(const Gf4Vector& v) {
  std::uint32_t x = 0;
  for (std::size_t i = 0; i < v.size(); ++i) x |= v[i].value() << (2 * i);
  return x;
}

SmallSpace small_space(std::size_t n, double p0) {
  if (n == 0 || n > kExactLengthCap) throw std::invalid_argument("exact oracle supports 1 <= N <= 8");
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must be in [0, 1]");
  SmallSpace s{n, std::uint32_t{1} << (2 * n), {}};
  const double q = (1.0 - p0) / 3.0;
  std::vector<double> pw(n + 1);
  for (std::size_t w = 0; w <= n; ++w)
    pw[w] = std::pow(p0, static_cast<double>(n - w)) * std::pow(q, static_cast<double>(w));
  s.prob.resize(s.size);
  for (std::uint32_t v = 0; v < s.size; ++v) s.prob[v] = pw[small_weight(v)];
  return s;
}

std::vector<std::uint32_t> small_codewords(const LinearSubcode& c) {
  std::vector<std::uint32_t> words{0};
  for (const auto& g : c.generators()) {
    const std::uint32_t base = pack_small(g);
    std::uint32_t mult[4] = {0, base, 0, 0};
    mult[2] = pack_small(vec_scale(Gf4::alpha(), g));
    mult[3] = mult[1] ^ mult[2];
    const std::size_t m = words.size();
    for (unsigned a = 1; a < 4; ++a)
      for (std::size_t i = 0; i < m; ++i) words.push_back(words[i] ^ mult[a]);
  }
  return words;
}

// F_{z - C}(p0) for every z.
std::vector<double> coset_f(const SmallSpace& s, const LinearSubcode& c) {
  const auto words = small_codewords(c);
  std::vector<double> f(s.size, -1.0);
  const double inv = 1.0 / static_cast<double>(words.size());
  for (std::uint32_t z = 0; z < s.size; ++z) {
    if (f[z] >= 0.0) continue;
    double sum = 0.0;
    for (auto w : words) sum += s.prob[z ^ w];
    for (auto w : words) f[z ^ w] = sum * inv;
  }
  return f;
}

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

void check_length(const LinearSubcode& c) {
  if (c.length() == 0 || c.length() > kExactLengthCap) throw std::invalid_argument("exact oracle supports 1 <= N <= 8");
}

}  // namespace

double lemma1_sum(const LinearSubcode& c, double p0) {
  check_length(c);
  const auto s = small_space(c.length(), p0);
  double sum = 0.0;
  for (double f : coset_f(s, c)) sum += f;
  return sum;
}

double lemma2_term(const LinearSubcode& c2, double p0) {
  check_length(c2);
  const auto s = small_space(c2.length(), p0);
  const auto f2 = coset_f(s, c2);
  const double fc = f2[0];
  double t = 0.0;
  for (double f : f2)
    if (f > 0.0) t += f * std::log2(f / fc);
  return t;
}

double lemma3_term(const LinearSubcode& c1, const LinearSubcode& c2, double p0) {
  check_length(c1);
  if (c1.length() != c2.length()) throw std::invalid_argument("code length mismatch");
  const auto s = small_space(c1.length(), p0);
  const auto f1 = coset_f(s, c1);
  const double fc2 = coset_f(s, c2)[0];
  double t = 0.0;
  for (double f : f1)
    if (f > 0.0) t += f * std::log2(fc2 / f);
  return t;
}

double exact_leakage(const LinearSubcode& c1, const LinearSubcode& c2, double p0) {
  check_length(c1);
  if (!c2.is_subcode_of(c1)) throw std::invalid_argument("exact_leakage: C2 must be a subcode of C1");
  const auto s = small_space(c1.length(), p0);
  const auto f1 = coset_f(s, c1);
  const auto f2 = coset_f(s, c2);
  double h_cond = 0.0, h = 0.0;
  for (std::uint32_t z = 0; z < s.size; ++z) {
    h_cond -= plogp(f2[z]);
    h -= plogp(f1[z]);
  }
  return h - h_cond;
}

MonotonicityProbe monotonicity_probe(const LinearSubcode& c2, const Gf4Vector& row, double p0, unsigned cap) {
  MonotonicityProbe r;
  r.before = leakage_bound(weight_histogram(c2, cap), p0).raw_bits;
  LinearSubcode grown = c2;
  r.grew = grown.add_row(row);
  r.after = r.grew ? leakage_bound(weight_histogram(grown, cap), p0).raw_bits : r.before;
  return r;
}

}  // namespace qpuf
