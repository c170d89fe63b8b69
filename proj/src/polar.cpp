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

#include "qpuf/polar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qpuf/parallel.hpp"
#include "qpuf/rng.hpp"
#include "qpuf/simd.hpp"

namespace qpuf {
namespace {

const simd::KernelTables& rs4_tables() {
  static const simd::KernelTables t = [] {
    std::array<std::array<std::uint8_t, 4>, 4> g{};
    const auto& m = Kernel::rs4().matrix();
    for (unsigned i = 0; i < 4; ++i)
      for (unsigned j = 0; j < 4; ++j) g[i][j] = static_cast<std::uint8_t>(m[i][j].value());
    return simd::KernelTables::build(g);
  }();
  return t;
}

// In-place u -> u * G^{(x)n} in natural order.
void kernel_transform(std::vector<std::uint8_t>& z) {
  const auto& g = rs4_tables().g;
  const std::size_t n = z.size();
  for (std::size_t m = 1; m < n; m *= 4) {
    for (std::size_t b = 0; b < n; b += 4 * m) {
      for (std::size_t t = 0; t < m; ++t) {
        std::uint8_t v[4];
        for (unsigned i = 0; i < 4; ++i) v[i] = z[b + i * m + t];
        for (unsigned j = 0; j < 4; ++j) {
          unsigned x = 0;
          for (unsigned i = 0; i < 4; ++i) x ^= kGf4Mul[v[i]][g[i][j]];
          z[b + j * m + t] = static_cast<std::uint8_t>(x);
        }
      }
    }
  }
}

}  // namespace

const Kernel& Kernel::rs4() {
  static const Kernel k = [] {
    // x^3, x^2, x, 1 at the points 1, alpha, alpha^2, 0
    constexpr unsigned rows[4][4] = {{1, 1, 1, 0}, {1, 3, 2, 0}, {1, 2, 3, 0}, {1, 1, 1, 1}};
    Matrix m{};
    for (unsigned i = 0; i < 4; ++i)
      for (unsigned j = 0; j < 4; ++j) m[i][j] = Gf4(rows[i][j]);
    return Kernel(m, "rs4:x3,x2,x,1@1,a,a2,0");
  }();
  return k;
}

Gf4Vector Kernel::row(unsigned i) const {
  if (i >= 4) throw std::out_of_range("Kernel::row");
  return Gf4Vector(std::vector<Gf4>(g_[i].begin(), g_[i].end()));
}

Gf4 Kernel::determinant() const {
  Matrix a = g_;
  Gf4 det = Gf4::one();
  for (unsigned c = 0; c < 4; ++c) {
    unsigned p = c;
    while (p < 4 && a[p][c].is_zero()) ++p;
    if (p == 4) return Gf4::zero();
    std::swap(a[p], a[c]);  // sign is irrelevant in characteristic 2
    det = det * a[c][c];
    const Gf4 inv = a[c][c].inverse();
    for (unsigned r = c + 1; r < 4; ++r) {
      const Gf4 f = a[r][c] * inv;
      for (unsigned j = c; j < 4; ++j) a[r][j] += f * a[c][j];
    }
  }
  return det;
}

std::array<Gf4, 4> Kernel::apply(const std::array<Gf4, 4>& u) const {
  std::array<Gf4, 4> x{};
  for (unsigned j = 0; j < 4; ++j)
    for (unsigned i = 0; i < 4; ++i) x[j] += u[i] * g_[i][j];
  return x;
}

bool is_power_of_four(std::size_t n) { return n != 0 && std::has_single_bit(n) && (std::countr_zero(n) % 2 == 0); }

unsigned polar_depth(std::size_t n) {
  if (n < 4 || !is_power_of_four(n)) throw std::invalid_argument("block length must be 4^n with n >= 1");
  return static_cast<unsigned>(std::countr_zero(n) / 2);
}

std::size_t digit_reverse(std::size_t i, unsigned digits) {
  std::size_t r = 0;
  for (unsigned d = 0; d < digits; ++d) {
    r = (r << 2) | (i & 3u);
    i >>= 2;
  }
  return r;
}

Gf4Vector polar_encode(const Gf4Vector& u) {
  const unsigned depth = polar_depth(u.size());
  std::vector<std::uint8_t> z(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) z[i] = static_cast<std::uint8_t>(u[i].value());
  kernel_transform(z);
  Gf4Vector x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) x[i] = Gf4(z[digit_reverse(i, depth)]);
  return x;
}

Gf4Vector generator_row(std::size_t n, std::size_t i) {
  if (i >= n) throw std::out_of_range("generator_row");
  Gf4Vector e(n);
  e[i] = Gf4::one();
  return polar_encode(e);
}

LlrVector llr_init(Gf4 y, const TransitionMatrix& w, double clamp) {
  LlrVector lam{};
  const double p0 = std::max(w(0, y.value()), kProbabilityFloor);
  for (unsigned i = 1; i < 4; ++i) {
    const double pi = std::max(w(i, y.value()), kProbabilityFloor);
    lam[i] = std::clamp(std::log(p0 / pi), -clamp, clamp);
  }
  return lam;
}

std::vector<LlrVector> channel_llrs(const Gf4Vector& y, const TransitionMatrix& w, double clamp) {
  std::array<LlrVector, 4> table;
  for (unsigned s = 0; s < 4; ++s) table[s] = llr_init(Gf4(s), w, clamp);
  std::vector<LlrVector> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = table[y[i].value()];
  return out;
}

LlrVector llr_update(unsigned k, const std::array<LlrVector, 4>& lams, std::span<const Gf4> decided) {
  if (k > 3) throw std::invalid_argument("llr_update: k must be in 0..3");
  if (decided.size() < k) throw std::invalid_argument("llr_update: missing decided symbols");
  double parent[16];
  for (unsigned s = 0; s < 4; ++s)
    for (unsigned j = 0; j < 4; ++j) parent[s * 4 + j] = lams[j][s];
  std::uint8_t dec[4] = {0, 0, 0, 0};
  for (unsigned i = 0; i < k; ++i) dec[i] = static_cast<std::uint8_t>(decided[i].value());
  double child[4];
  simd::kernels().kernel_update(rs4_tables(), k, parent, dec, 1, child);
  return {child[0], child[1], child[2], child[3]};
}

void DecoderConfig::validate() const {
  if (list_size < 1) throw std::invalid_argument("list size must be >= 1");
  if (!(llr_clamp > 0.0) || !std::isfinite(llr_clamp)) throw std::invalid_argument("llr clamp must be positive");
}

void CodeConstruction::validate() const {
  polar_depth(block_length);
  if (error_rate.size() != block_length || reliability_order.size() != block_length)
    throw std::invalid_argument("construction: per-position arrays do not match block length");
  for (double e : error_rate)
    if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("construction: error rate outside [0,1]");
  std::vector<bool> seen(block_length, false);
  for (std::size_t i = 0; i < block_length; ++i) {
    const auto p = reliability_order[i];
    if (p >= block_length || seen[p]) throw std::invalid_argument("construction: order is not a permutation");
    seen[p] = true;
    if (i > 0 && error_rate[p] < error_rate[reliability_order[i - 1]])
      throw std::invalid_argument("construction: order is not sorted by error rate");
  }
  if (kernel_id.empty()) throw std::invalid_argument("construction: missing kernel id");
}

Gf4Vector encode(const Gf4Vector& u, const CodeConstruction& c) {
  if (u.size() != c.block_length) throw std::invalid_argument("encode: length does not match construction");
  return polar_encode(u);
}

std::vector<std::uint32_t> reliability_order(std::span<const double> error_rate) {
  std::vector<std::uint32_t> order(error_rate.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return error_rate[a] < error_rate[b]; });
  return order;
}

CodeConstruction genie_construct(const TransitionMatrix& w, std::size_t n, std::uint64_t frames,
                                 std::uint64_t seed) {
  polar_depth(n);
  if (frames < 1000) throw std::invalid_argument("genie construction needs at least 1000 frames");
  const auto llr_table = [&] {
    std::array<LlrVector, 4> t;
    for (unsigned s = 0; s < 4; ++s) t[s] = llr_init(Gf4(s), w);
    return t;
  }();
  using Counts = std::vector<std::uint64_t>;
  const Counts errors = parallel_reduce(
      frames, Counts(n, 0),
      [&](std::uint64_t b, std::uint64_t e, Counts& acc) {
        SclDecoder dec(n, DecoderConfig{1, kDefaultLlrClamp});
        Gf4Vector u(n);
        std::vector<LlrVector> llrs(n);
        for (std::uint64_t f = b; f < e; ++f) {
          Xoshiro256 rng(derive_seed(seed, stream::kGenieFrames, f));
          for (std::size_t i = 0; i < n; ++i) u[i] = Gf4(rng.symbol());
          const Gf4Vector x = polar_encode(u);
          const Gf4Vector y = transmit(w, x, rng);
          for (std::size_t i = 0; i < n; ++i) llrs[i] = llr_table[y[i].value()];
          dec.genie_pass(llrs, u, acc);
        }
      },
      [](Counts& out, const Counts& p) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += p[i];
      });

  CodeConstruction c;
  c.block_length = n;
  c.error_rate.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.error_rate[i] = static_cast<double>(errors[i]) / static_cast<double>(frames);
  c.reliability_order = reliability_order(c.error_rate);
  c.frames_used = frames;
  c.channel = w;
  c.kernel_id = Kernel::rs4().id();
  return c;
}

// Decoder tree: depth d holds nodes of length len_[d] = N / 4^d. For each
// path, llr[llr_off_[d] + s*len_[d] + pos] is the LLR of symbol s at
// position pos of the active depth-d node (depth 0 is the shared channel
// buffer chan_), and ps[ps_off_[d] + i*len_[d+1] + t] holds the partial sums
// of the completed children of the active depth-d node.

SclDecoder::SclDecoder(std::size_t n, DecoderConfig config) : n_(n), depth_(polar_depth(n)), config_(config) {
  config_.validate();
  len_.resize(depth_ + 1);
  for (unsigned d = 0; d <= depth_; ++d) len_[d] = n_ >> (2 * d);
  llr_off_.assign(depth_ + 2, 0);
  for (unsigned d = 1; d <= depth_; ++d) llr_off_[d + 1] = llr_off_[d] + 4 * len_[d];
  ps_off_.assign(depth_ + 1, 0);
  for (unsigned d = 0; d < depth_; ++d) ps_off_[d + 1] = ps_off_[d] + len_[d];
  chan_.resize(4 * n_);
  cur_.assign(config_.list_size, fresh_path());
  next_.assign(config_.list_size, fresh_path());
}

SclDecoder::Path SclDecoder::fresh_path() const {
  Path p;
  p.llr.assign(llr_off_[depth_ + 1], 0.0);
  p.ps.assign(ps_off_[depth_], 0);
  p.u.assign(n_, 0);
  return p;
}

void SclDecoder::load_channel(std::span<const LlrVector> llrs) {
  if (llrs.size() != n_) throw std::invalid_argument("decoder: LLR count does not match block length");
  for (std::size_t i = 0; i < n_; ++i) {
    const LlrVector& lam = llrs[digit_reverse(i, depth_)];
    for (unsigned s = 0; s < 4; ++s) {
      if (!std::isfinite(lam[s])) throw std::invalid_argument("decoder: non-finite LLR");
      chan_[s * n_ + i] = std::clamp(lam[s], -config_.llr_clamp, config_.llr_clamp);
    }
  }
}

unsigned SclDecoder::digit(std::size_t phi, unsigned d) const {
  return static_cast<unsigned>(phi >> (2 * (depth_ - 1 - d))) & 3u;
}

unsigned SclDecoder::start_depth(std::size_t phi) const {
  if (phi == 0) return 0;
  return depth_ - 1 - static_cast<unsigned>(std::countr_zero(phi)) / 2;
}

void SclDecoder::descend(Path& p, std::size_t phi) const {
  const auto& kern = simd::kernels();
  for (unsigned d = start_depth(phi); d < depth_; ++d) {
    const double* parent = d == 0 ? chan_.data() : p.llr.data() + llr_off_[d];
    kern.kernel_update(rs4_tables(), digit(phi, d), parent, p.ps.data() + ps_off_[d], len_[d + 1],
                       p.llr.data() + llr_off_[d + 1]);
  }
}

void SclDecoder::commit(Path& p, std::size_t phi, unsigned sym) const {
  const auto& g = rs4_tables().g;
  p.u[phi] = static_cast<std::uint8_t>(sym);
  p.ps[ps_off_[depth_ - 1] + digit(phi, depth_ - 1)] = static_cast<std::uint8_t>(sym);
  for (unsigned e = depth_ - 1; e >= 1; --e) {
    if (digit(phi, e) != 3) break;
    const std::size_t m = len_[e + 1];
    const std::uint8_t* src = p.ps.data() + ps_off_[e];
    std::uint8_t* dst = p.ps.data() + ps_off_[e - 1] + digit(phi, e - 1) * len_[e];
    for (std::size_t t = 0; t < m; ++t) {
      const unsigned v0 = src[t], v1 = src[m + t], v2 = src[2 * m + t], v3 = src[3 * m + t];
      for (unsigned j = 0; j < 4; ++j)
        dst[j * m + t] = static_cast<std::uint8_t>(kGf4Mul[v0][g[0][j]] ^ kGf4Mul[v1][g[1][j]] ^
                                                   kGf4Mul[v2][g[2][j]] ^ kGf4Mul[v3][g[3][j]]);
    }
  }
}

std::vector<DecodedCandidate> SclDecoder::decode(std::span<const LlrVector> llrs, const FrozenSymbols& frozen) {
  if (frozen.size() != n_) throw std::invalid_argument("decoder: frozen map does not match block length");
  load_channel(llrs);
  std::size_t active = 1;
  cur_[0].metric = 0.0;

  struct Choice {
    double metric;
    std::uint32_t path;
    std::uint8_t sym;
  };
  std::vector<Choice> choices;
  choices.reserve(4 * config_.list_size);

  for (std::size_t phi = 0; phi < n_; ++phi) {
    for (std::size_t a = 0; a < active; ++a) descend(cur_[a], phi);
    if (frozen[phi]) {
      const unsigned v = frozen[phi]->value();
      for (std::size_t a = 0; a < active; ++a) {
        const double* lam = leaf(cur_[a]);
        cur_[a].metric += lam[v] - *std::min_element(lam, lam + 4);
        commit(cur_[a], phi, v);
      }
      continue;
    }
    choices.clear();
    for (std::size_t a = 0; a < active; ++a) {
      const double* lam = leaf(cur_[a]);
      const double lo = *std::min_element(lam, lam + 4);
      for (unsigned s = 0; s < 4; ++s)
        choices.push_back({cur_[a].metric + (lam[s] - lo), static_cast<std::uint32_t>(a), static_cast<std::uint8_t>(s)});
    }
    std::stable_sort(choices.begin(), choices.end(),
                     [](const Choice& x, const Choice& y) { return x.metric < y.metric; });
    const std::size_t keep = std::min<std::size_t>(config_.list_size, choices.size());
    for (std::size_t i = 0; i < keep; ++i) {
      next_[i] = cur_[choices[i].path];
      next_[i].metric = choices[i].metric;
      commit(next_[i], phi, choices[i].sym);
    }
    std::swap(cur_, next_);
    active = keep;
  }

  std::vector<std::size_t> idx(active);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return cur_[a].metric < cur_[b].metric; });
  std::vector<DecodedCandidate> out;
  out.reserve(active);
  for (std::size_t a : idx) {
    DecodedCandidate c{Gf4Vector(n_), cur_[a].metric};
    for (std::size_t i = 0; i < n_; ++i) c.u[i] = Gf4(cur_[a].u[i]);
    out.push_back(std::move(c));
  }
  return out;
}

void SclDecoder::genie_pass(std::span<const LlrVector> llrs, const Gf4Vector& truth, std::span<std::uint64_t> errors) {
  if (truth.size() != n_ || errors.size() != n_) throw std::invalid_argument("genie pass: length mismatch");
  load_channel(llrs);
  Path& p = cur_[0];
  for (std::size_t phi = 0; phi < n_; ++phi) {
    descend(p, phi);
    const double* lam = leaf(p);
    const auto hard = static_cast<unsigned>(std::min_element(lam, lam + 4) - lam);
    const unsigned t = truth[phi].value();
    if (hard != t) ++errors[phi];
    commit(p, phi, t);
  }
}

std::vector<DecodedCandidate> scl_decode(std::span<const LlrVector> llrs, const FrozenSymbols& frozen,
                                         const DecoderConfig& config) {
  SclDecoder dec(llrs.size(), config);
  return dec.decode(llrs, frozen);
}

}  // namespace qpuf
