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

#ifndef QPUF_POLAR_HPP
#define QPUF_POLAR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpuf/channel_model.hpp"
#include "qpuf/gf4.hpp"

namespace qpuf {

/// 4x4 kernel over GF(4). Rows from top to bottom are the monomials
/// x^3, x^2, x, 1 evaluated at (1, alpha, alpha^2, 0), so the span of the
/// bottom i rows is a (4, i) Reed-Solomon code.
class Kernel {
 public:
  using Matrix = std::array<std::array<Gf4, 4>, 4>;

  static const Kernel& rs4();

  const Matrix& matrix() const { return g_; }
  Gf4 operator()(unsigned i, unsigned j) const { return g_[i][j]; }
  Gf4Vector row(unsigned i) const;
  const std::string& id() const { return id_; }
  Gf4 determinant() const;
  /// (x0..x3) = (u0..u3) G.
  std::array<Gf4, 4> apply(const std::array<Gf4, 4>& u) const;

 private:
  Kernel(Matrix g, std::string id) : g_(g), id_(std::move(id)) {}
  Matrix g_;
  std::string id_;
};

bool is_power_of_four(std::size_t n);
/// log_4(n); throws std::invalid_argument unless n = 4^k with k >= 1.
unsigned polar_depth(std::size_t n);
/// Reverses the order of the `digits` base-4 digits of i.
std::size_t digit_reverse(std::size_t i, unsigned digits);

/// x = u G_N with G_N the n-fold kernel product followed by base-4 digit
/// reversal of positions. Throws std::invalid_argument unless |u| = 4^n, n >= 1.
Gf4Vector polar_encode(const Gf4Vector& u);

/// Row i of G_N, i.e. polar_encode(e_i).
Gf4Vector generator_row(std::size_t n, std::size_t i);

using LlrVector = std::array<double, 4>;

inline constexpr double kDefaultLlrClamp = 500.0;
inline constexpr double kProbabilityFloor = 1e-12;

/// lam[i] = ln(W(0, y) / W(i, y)) with probabilities floored and the result clamped.
LlrVector llr_init(Gf4 y, const TransitionMatrix& w, double clamp = kDefaultLlrClamp);
std::vector<LlrVector> channel_llrs(const Gf4Vector& y, const TransitionMatrix& w,
                                    double clamp = kDefaultLlrClamp);

/// Max-log update for kernel input k given the LLRs of the four kernel
/// outputs and the k inputs already decided.
LlrVector llr_update(unsigned k, const std::array<LlrVector, 4>& lams, std::span<const Gf4> decided);

struct DecoderConfig {
  unsigned list_size = 4;
  double llr_clamp = kDefaultLlrClamp;
  void validate() const;
};

struct CodeConstruction {
  std::size_t block_length = 0;
  std::vector<double> error_rate;  // per source position
  std::vector<std::uint32_t> reliability_order;  // ascending error rate, ties by index
  std::uint64_t frames_used = 0;
  TransitionMatrix channel;
  std::string kernel_id;

  /// Throws std::invalid_argument if the fields are inconsistent.
  void validate() const;
};

/// Same as polar_encode; checks |u| against the construction.
Gf4Vector encode(const Gf4Vector& u, const CodeConstruction& c);

/// Genie-aided successive cancellation over `frames` random frames through w.
CodeConstruction genie_construct(const TransitionMatrix& w, std::size_t n, std::uint64_t frames,
                                 std::uint64_t seed);

/// Sorts positions by ascending rate, ties by lower index.
std::vector<std::uint32_t> reliability_order(std::span<const double> error_rate);

/// frozen[i] holds the fixed value of position i, or nothing if i is free.
using FrozenSymbols = std::vector<std::optional<Gf4>>;

struct DecodedCandidate {
  Gf4Vector u;
  double metric = 0.0;
};

/// Successive cancellation list decoder with reusable working memory. Not
/// thread-safe; use one instance per thread.
class SclDecoder {
 public:
  SclDecoder(std::size_t n, DecoderConfig config);

  std::size_t block_length() const { return n_; }
  const DecoderConfig& config() const { return config_; }

  /// Candidates in ascending path metric (ties by path order).
  std::vector<DecodedCandidate> decode(std::span<const LlrVector> llrs, const FrozenSymbols& frozen);

  /// Single-path pass with every decision replaced by truth[i]; adds 1 to
  /// errors[i] where the hard decision (lowest index on ties) differs.
  void genie_pass(std::span<const LlrVector> llrs, const Gf4Vector& truth, std::span<std::uint64_t> errors);

 private:
  struct Path {
    std::vector<double> llr;
    std::vector<std::uint8_t> ps;
    std::vector<std::uint8_t> u;
    double metric = 0.0;
  };

  void load_channel(std::span<const LlrVector> llrs);
  unsigned digit(std::size_t phi, unsigned d) const;
  unsigned start_depth(std::size_t phi) const;
  void descend(Path& p, std::size_t phi) const;
  const double* leaf(const Path& p) const { return p.llr.data() + llr_off_[depth_]; }
  void commit(Path& p, std::size_t phi, unsigned sym) const;
  Path fresh_path() const;

  std::size_t n_;
  unsigned depth_;
  DecoderConfig config_;
  std::vector<double> chan_;
  std::vector<std::size_t> llr_off_, ps_off_, len_;
  std::vector<Path> cur_, next_;
};

/// Convenience wrapper around SclDecoder::decode.
std::vector<DecodedCandidate> scl_decode(std::span<const LlrVector> llrs, const FrozenSymbols& frozen,
                                         const DecoderConfig& config);

}  // namespace qpuf

#endif  // QPUF_POLAR_HPP
