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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qpuf/gf4.hpp"

using qpuf::Gf4;
using qpuf::Gf4Vector;

TEST_SUITE("gf4") {

TEST_CASE("addition examples") {
  CHECK(Gf4(1) + Gf4(2) == Gf4(3));
  CHECK(Gf4(0) + Gf4(3) == Gf4(3));
  for (unsigned a = 0; a < 4; ++a) CHECK(Gf4(a) + Gf4(a) == Gf4(0));
}

TEST_CASE("multiplication examples") {
  CHECK(Gf4(2) * Gf4(2) == Gf4(3));
  CHECK(Gf4(2) * Gf4(3) == Gf4(1));
  for (unsigned b = 0; b < 4; ++b) CHECK(Gf4(0) * Gf4(b) == Gf4(0));
}

TEST_CASE("tables agree with polynomial arithmetic") {
  for (unsigned a = 0; a < 4; ++a)
    for (unsigned b = 0; b < 4; ++b) {
      CHECK((Gf4(a) + Gf4(b)).value() == (a ^ b));
      CHECK((Gf4(a) * Gf4(b)).value() == oracle::gf4_mul(a, b));
      CHECK(qpuf::kGf4Mul[a][b] == oracle::gf4_mul(a, b));
    }
}

TEST_CASE("field axioms") {
  for (unsigned a = 0; a < 4; ++a) {
    if (a) CHECK(Gf4(a) * Gf4(a).inverse() == Gf4(1));
    for (unsigned b = 0; b < 4; ++b)
      for (unsigned c = 0; c < 4; ++c) {
        const Gf4 x(a), y(b), z(c);
        CHECK(x * (y + z) == x * y + x * z);
        CHECK((x * y) * z == x * (y * z));
      }
  }
  CHECK_THROWS_AS(Gf4(0).inverse(), std::domain_error);
  CHECK_THROWS_AS(Gf4(4), std::invalid_argument);
}

TEST_CASE("vector weight and arithmetic") {
  CHECK(qpuf::hamming_weight(Gf4Vector{0, 0, 0, 0}) == 0);
  CHECK(qpuf::hamming_weight(Gf4Vector{1, 2, 3, 0}) == 3);
  CHECK(qpuf::vec_add(Gf4Vector{1, 2}, Gf4Vector{2, 2}) == Gf4Vector{3, 0});
  const Gf4Vector u{3, 1, 0, 2};
  CHECK(qpuf::vec_add(u, Gf4Vector(4)) == u);
  CHECK(qpuf::vec_add(qpuf::vec_add(u, Gf4Vector{1, 1, 1, 1}), Gf4Vector{1, 1, 1, 1}) == u);
  CHECK_THROWS(qpuf::vec_add(u, Gf4Vector{1}));
}

TEST_CASE("weight of difference is distance") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 100;
    Gf4Vector x(n), z(n);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = Gf4(rng() & 3);
      z[i] = Gf4(rng() & 3);
      differ += x[i] != z[i];
    }
    CHECK(qpuf::hamming_weight(qpuf::vec_add(x, z)) == differ);
    CHECK(qpuf::hamming_distance(x, z) == differ);
  }
}

TEST_CASE("packed vectors match unpacked") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 31u, 64u, 65u, 200u, 256u}) {
    Gf4Vector u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = Gf4(rng() & 3);
      v[i] = Gf4(rng() & 3);
    }
    const qpuf::PackedGf4Vector pu(u), pv(v);
    CHECK(pu.unpacked() == u);
    CHECK(pu.weight() == qpuf::hamming_weight(u));
    CHECK((pu + pv).unpacked() == qpuf::vec_add(u, v));
    for (unsigned a = 0; a < 4; ++a) CHECK(pu.scaled(Gf4(a)).unpacked() == qpuf::vec_scale(Gf4(a), u));
    CHECK(Gf4Vector::unpack(u.pack(), n) == u);
    CHECK(u.pack().size() == (n + 3) / 4);
  }
}

}  // TEST_SUITE
