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

#ifndef QPUF_GF4_HPP
#define QPUF_GF4_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace qpuf {

/// Element of GF(4) in the polynomial basis over x^2 + x + 1.
/// Labels: 0, 1, 2 = alpha, 3 = alpha^2 = alpha + 1. Bit 0 of the label is
/// the coefficient of 1 and bit 1 the coefficient of alpha, so addition is
/// XOR of labels.
class Gf4 {
 public:
  constexpr Gf4() = default;
  constexpr explicit Gf4(unsigned v) : v_(static_cast<std::uint8_t>(v & 3u)) {
    if (v > 3u) throw std::invalid_argument("Gf4: label out of range");
  }

  static constexpr Gf4 zero() { return Gf4(0); }
  static constexpr Gf4 one() { return Gf4(1); }
  static constexpr Gf4 alpha() { return Gf4(2); }

  constexpr unsigned value() const { return v_; }
  constexpr bool is_zero() const { return v_ == 0; }

  /// Multiplicative inverse; zero has none.
  constexpr Gf4 inverse() const {
    constexpr std::uint8_t inv[4] = {0, 1, 3, 2};
    if (v_ == 0) throw std::domain_error("Gf4: zero has no inverse");
    return Gf4(inv[v_]);
  }

  friend constexpr Gf4 operator+(Gf4 a, Gf4 b) { return Gf4(a.v_ ^ b.v_); }
  friend constexpr Gf4 operator-(Gf4 a, Gf4 b) { return a + b; }
  friend constexpr Gf4 operator*(Gf4 a, Gf4 b) {
    // log/antilog over the cyclic group {1, alpha, alpha^2}
    constexpr std::uint8_t log[4] = {0, 0, 1, 2};
    constexpr std::uint8_t exp[3] = {1, 2, 3};
    if (a.v_ == 0 || b.v_ == 0) return Gf4(0);
    return Gf4(exp[(log[a.v_] + log[b.v_]) % 3]);
  }
  Gf4& operator+=(Gf4 o) { v_ ^= o.v_; return *this; }
  friend constexpr bool operator==(Gf4, Gf4) = default;

 private:
  std::uint8_t v_ = 0;
};

constexpr Gf4 add(Gf4 a, Gf4 b) { return a + b; }
constexpr Gf4 mul(Gf4 a, Gf4 b) { return a * b; }

/// Product table over labels; used by inner loops that work on raw bytes.
inline constexpr std::array<std::array<std::uint8_t, 4>, 4> kGf4Mul = [] {
  std::array<std::array<std::uint8_t, 4>, 4> t{};
  for (unsigned a = 0; a < 4; ++a)
    for (unsigned b = 0; b < 4; ++b)
      t[a][b] = static_cast<std::uint8_t>((Gf4(a) * Gf4(b)).value());
  return t;
}();

/// Fixed-length vector over GF(4).
class Gf4Vector {
 public:
  Gf4Vector() = default;
  explicit Gf4Vector(std::size_t n) : s_(n) {}
  Gf4Vector(std::initializer_list<unsigned> labels);
  explicit Gf4Vector(std::vector<Gf4> symbols) : s_(std::move(symbols)) {}

  std::size_t size() const { return s_.size(); }
  bool empty() const { return s_.empty(); }
  Gf4 operator[](std::size_t i) const { return s_[i]; }
  Gf4& operator[](std::size_t i) { return s_[i]; }
  std::span<const Gf4> symbols() const { return s_; }
  auto begin() const { return s_.begin(); }
  auto end() const { return s_.end(); }

  friend bool operator==(const Gf4Vector&, const Gf4Vector&) = default;

  /// 2 bits per symbol, symbol i in bits 2(i%4)..2(i%4)+1 of byte i/4.
  std::vector<std::uint8_t> pack() const;
  static Gf4Vector unpack(std::span<const std::uint8_t> bytes, std::size_t n);

 private:
  std::vector<Gf4> s_;
};

std::size_t hamming_weight(const Gf4Vector& v);

/// Number of positions where u and v differ.
std::size_t hamming_distance(const Gf4Vector& u, const Gf4Vector& v);

/// Symbol-wise sum. Throws std::invalid_argument on length mismatch.
Gf4Vector vec_add(const Gf4Vector& u, const Gf4Vector& v);

/// Scalar multiple a*v.
Gf4Vector vec_scale(Gf4 a, const Gf4Vector& v);

/// Bit-plane representation: lo holds bit 0 of every label, hi bit 1.
/// Addition is plane-wise XOR and the Hamming weight is popcount(lo | hi).
class PackedGf4Vector {
 public:
  PackedGf4Vector() = default;
  explicit PackedGf4Vector(std::size_t n);
  explicit PackedGf4Vector(const Gf4Vector& v);

  std::size_t size() const { return n_; }
  std::size_t words() const { return lo_.size(); }
  std::span<const std::uint64_t> lo() const { return lo_; }
  std::span<const std::uint64_t> hi() const { return hi_; }

  Gf4 get(std::size_t i) const;
  void set(std::size_t i, Gf4 a);

  PackedGf4Vector& operator+=(const PackedGf4Vector& o);
  friend PackedGf4Vector operator+(PackedGf4Vector a, const PackedGf4Vector& b) { return a += b; }
  friend bool operator==(const PackedGf4Vector&, const PackedGf4Vector&) = default;

  /// a * v, computed plane-wise: alpha*(l + h alpha) = h + (l ^ h) alpha.
  PackedGf4Vector scaled(Gf4 a) const;
  std::size_t weight() const;
  Gf4Vector unpacked() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> lo_, hi_;
};

}  // namespace qpuf

#endif  // QPUF_GF4_HPP
