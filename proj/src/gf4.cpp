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

#include "qpuf/gf4.hpp"

#include <bit>

namespace qpuf {

Gf4Vector::Gf4Vector(std::initializer_list<unsigned> labels) {
  s_.reserve(labels.size());
  for (unsigned l : labels) s_.emplace_back(l);
}

std::vector<std::uint8_t> Gf4Vector::pack() const {
  std::vector<std::uint8_t> out((s_.size() + 3) / 4, 0);
  for (std::size_t i = 0; i < s_.size(); ++i)
    out[i / 4] |= static_cast<std::uint8_t>(s_[i].value() << (2 * (i % 4)));
  return out;
}

Gf4Vector Gf4Vector::unpack(std::span<const std::uint8_t> bytes, std::size_t n) {
  if (bytes.size() < (n + 3) / 4)
    throw std::invalid_argument("Gf4Vector::unpack: buffer too short");
  Gf4Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v.s_[i] = Gf4((bytes[i / 4] >> (2 * (i % 4))) & 3u);
  return v;
}

std::size_t hamming_weight(const Gf4Vector& v) {
  std::size_t w = 0;
  for (Gf4 a : v) w += !a.is_zero();
  return w;
}

std::size_t hamming_distance(const Gf4Vector& u, const Gf4Vector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < u.size(); ++i) d += u[i] != v[i];
  return d;
}

Gf4Vector vec_add(const Gf4Vector& u, const Gf4Vector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("vec_add: length mismatch");
  Gf4Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + v[i];
  return out;
}

Gf4Vector vec_scale(Gf4 a, const Gf4Vector& v) {
  Gf4Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = a * v[i];
  return out;
}

PackedGf4Vector::PackedGf4Vector(std::size_t n) : n_(n), lo_((n + 63) / 64, 0), hi_((n + 63) / 64, 0) {}

PackedGf4Vector::PackedGf4Vector(const Gf4Vector& v) : PackedGf4Vector(v.size()) {
  for (std::size_t i = 0; i < v.size(); ++i) set(i, v[i]);
}

Gf4 PackedGf4Vector::get(std::size_t i) const {
  const std::uint64_t bit = std::uint64_t{1} << (i % 64);
  return Gf4(((lo_[i / 64] & bit) ? 1u : 0u) | ((hi_[i / 64] & bit) ? 2u : 0u));
}

void PackedGf4Vector::set(std::size_t i, Gf4 a) {
  const std::uint64_t bit = std::uint64_t{1} << (i % 64);
  lo_[i / 64] = (a.value() & 1u) ? (lo_[i / 64] | bit) : (lo_[i / 64] & ~bit);
  hi_[i / 64] = (a.value() & 2u) ? (hi_[i / 64] | bit) : (hi_[i / 64] & ~bit);
}

PackedGf4Vector& PackedGf4Vector::operator+=(const PackedGf4Vector& o) {
  if (o.n_ != n_) throw std::invalid_argument("PackedGf4Vector: length mismatch");
  for (std::size_t w = 0; w < lo_.size(); ++w) {
    lo_[w] ^= o.lo_[w];
    hi_[w] ^= o.hi_[w];
  }
  return *this;
}

PackedGf4Vector PackedGf4Vector::scaled(Gf4 a) const {
  PackedGf4Vector out(n_);
  for (std::size_t w = 0; w < lo_.size(); ++w) {
    const std::uint64_t l = lo_[w], h = hi_[w];
    switch (a.value()) {
      case 0: break;
      case 1: out.lo_[w] = l; out.hi_[w] = h; break;
      case 2: out.lo_[w] = h; out.hi_[w] = l ^ h; break;
      case 3: out.lo_[w] = l ^ h; out.hi_[w] = l; break;
    }
  }
  return out;
}

std::size_t PackedGf4Vector::weight() const {
  std::size_t w = 0;
  for (std::size_t i = 0; i < lo_.size(); ++i) w += static_cast<std::size_t>(std::popcount(lo_[i] | hi_[i]));
  return w;
}

Gf4Vector PackedGf4Vector::unpacked() const {
  Gf4Vector v(n_);
  for (std::size_t i = 0; i < n_; ++i) v[i] = get(i);
  return v;
}

}  // namespace qpuf
