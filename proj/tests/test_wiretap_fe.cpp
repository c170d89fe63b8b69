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

#include <set>
#include <string>

#include "qpuf/channel_model.hpp"
#include "qpuf/wiretap_fe.hpp"

using namespace qpuf;

namespace {

// additive noise law close to the SRAM defaults
const TransitionMatrix& test_channel() {
  static const TransitionMatrix w = wiretap_matrix(ResponseDistribution{{0.963, 0.035, 0.0, 0.002}});
  return w;
}

const CodeConstruction& construction256() {
  static const CodeConstruction c = genie_construct(test_channel(), 256, 5000, 11);
  return c;
}

Gf4Vector random_vector(Xoshiro256& rng, std::size_t n) {
  Gf4Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = Gf4(rng.symbol());
  return v;
}

}  // namespace

TEST_SUITE("wiretap_fe") {

TEST_CASE("sha256 known answer") {
  const std::string abc = "abc";
  const auto d = sha256(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()));
  CHECK(to_hex(d) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("partition") {
  const auto& c = construction256();
  const auto p0 = partition(c, 0, 64);
  CHECK(p0.mask.empty());
  CHECK(p0.secret.size() == 64);
  CHECK(std::equal(p0.secret.begin(), p0.secret.end(), c.reliability_order.begin()));
  const auto p15 = partition(c, 15, 49);
  CHECK(p15.frozen.size() == 192);
  std::set<std::uint32_t> all(p15.mask.begin(), p15.mask.end());
  all.insert(p15.secret.begin(), p15.secret.end());
  all.insert(p15.frozen.begin(), p15.frozen.end());
  CHECK(all.size() == 256);
  for (auto i : p15.mask)
    for (auto j : p15.frozen) CHECK(c.error_rate[i] <= c.error_rate[j]);
  CHECK(partition(c, 200, 56).frozen.empty());
  CHECK_THROWS(partition(c, 200, 57));
}

TEST_CASE("enrollment") {
  const auto& c = construction256();
  const auto p = partition(c, 15, 49);
  Xoshiro256 rng(1);
  const SecretSeed seed{random_vector(rng, 49)};
  const auto q = random_vector(rng, 256);
  const auto a = enroll(seed, q, p, c, 100);
  const auto b = enroll(seed, q, p, c, 200);
  CHECK(a.helper.payload != b.helper.payload);
  CHECK(a.helper.salt != b.helper.salt);
  CHECK(a.key != b.key);
  CHECK(a.key.bits() == 128);

  // the mask never reaches the key: same salt stream, different mask streams
  const auto again = enroll(seed, q, p, c, 100);
  CHECK(again.helper == a.helper);
  CHECK(again.key == kdf(seed.symbols, a.helper.salt));

  // payload + q is a codeword carrying the seed on S and zeros on F
  const Gf4Vector x = vec_add(a.helper.payload, q);
  SclDecoder dec(256, DecoderConfig{});
  FrozenSymbols frozen(256);
  for (auto i : p.frozen) frozen[i] = Gf4(0);
  const auto cands = dec.decode(channel_llrs(x, TransitionMatrix::identity()), frozen);
  REQUIRE_FALSE(cands.empty());
  CHECK(polar_encode(cands[0].u) == x);
  for (std::size_t k = 0; k < 49; ++k) CHECK(cands[0].u[p.secret[k]] == seed.symbols[k]);

  // without a mask the payload is a function of seed and q alone
  const auto p0 = partition(c, 0, 64);
  const SecretSeed s64{random_vector(rng, 64)};
  CHECK(enroll(s64, q, p0, c, 1).helper.payload == enroll(s64, q, p0, c, 2).helper.payload);
  CHECK_THROWS(enroll(SecretSeed{random_vector(rng, 10)}, q, p0, c, 1));
}

TEST_CASE("reconstruction") {
  const auto& c = construction256();
  const auto p = partition(c, 0, 64);
  Xoshiro256 rng(2);
  const SecretSeed seed{random_vector(rng, 64)};
  const auto q = random_vector(rng, 256);
  const auto e = enroll(seed, q, p, c, 7);
  CHECK(reconstruct(e.helper, q, c) == e.key);

  SclDecoder dec(256, DecoderConfig{});
  int ok = 0;
  for (int t = 0; t < 1000; ++t) {
    Gf4Vector q2 = q;
    const std::size_t i = rng() % 256;
    q2[i] = q2[i] + Gf4(1 + rng() % 3);
    const auto s = reconstruct_seed(e.helper, q2, c, dec);
    ok += s && *s == seed.symbols;
  }
  CHECK(ok == 1000);

  auto other = construction256();
  other.frames_used += 1;
  CHECK_THROWS_AS(reconstruct(e.helper, q, other), HelperMismatchError);
}

TEST_CASE("multi-block keys") {
  const auto& c = construction256();
  const auto p = partition(c, 15, 48);
  Xoshiro256 rng(3);
  std::vector<SecretSeed> seeds{{random_vector(rng, 48)}, {random_vector(rng, 48)}};
  const auto q = random_vector(rng, 512);
  const auto e = enroll_blocks(seeds, q, p, c, 9);
  REQUIRE(e.helpers.size() == 2);
  CHECK(e.helpers[0].salt == e.helpers[1].salt);
  CHECK(reconstruct_blocks(e.helpers, q, c) == e.key);
  Gf4Vector joined(96);
  for (std::size_t k = 0; k < 48; ++k) {
    joined[k] = seeds[0].symbols[k];
    joined[48 + k] = seeds[1].symbols[k];
  }
  CHECK(e.key == kdf(joined, e.helpers[0].salt));
  CHECK_THROWS(enroll_blocks(seeds, random_vector(rng, 256), p, c, 9));
}

TEST_CASE("key derivation") {
  Xoshiro256 rng(4);
  const auto s = random_vector(rng, 64);
  const std::vector<std::uint8_t> salt(16, 5);
  CHECK(kdf(s, salt) == kdf(s, salt));
  CHECK(kdf(s, salt).bits() == 128);
  auto s2 = s;
  s2[10] = s2[10] + Gf4(1);
  CHECK(kdf(s, salt) != kdf(s2, salt));
  CHECK(kdf(s, std::vector<std::uint8_t>(16, 6)) != kdf(s, salt));

  const auto packed = s.pack();
  std::vector<std::uint8_t> input(1 + salt.size() + packed.size(), kKdfSha256Truncated);
  std::copy(salt.begin(), salt.end(), input.begin() + 1);
  std::copy(packed.begin(), packed.end(), input.begin() + 1 + static_cast<std::ptrdiff_t>(salt.size()));
  const auto d = sha256(input);
  CHECK(kdf(s, salt, kKdfSha256Truncated, 256).bytes == std::vector<std::uint8_t>(d.begin(), d.end()));
  CHECK_THROWS(kdf(s, salt, 9));
  CHECK_THROWS(kdf(s, salt, kKdfSha256Truncated, 12));
}

TEST_CASE("key budget") {
  CHECK(key_bits_budget(64, 0.0, 1) == 128);
  CHECK(key_bits_budget(48, 0.9827, 2) == 2 * 94);
  CHECK(key_bits_budget(48, 0.9827, 1) == 94);
  CHECK(key_bits_budget(30, 0.0) == 60);
  CHECK(key_bits_budget(3, 10.0) == 0);
  CHECK_THROWS(key_bits_budget(3, -1.0));
}

TEST_CASE("helper format") {
  const auto& c = construction256();
  Xoshiro256 rng(5);
  const auto e = enroll(SecretSeed{random_vector(rng, 64)}, random_vector(rng, 256), partition(c, 0, 64), c, 3);
  const auto bytes = serialize_helper(e.helper);
  CHECK(bytes.size() == 4 + 1 + 32 + 4 + 2 + 2 + 1 + (1 + 16) + 64);
  std::size_t off = 0;
  CHECK(parse_helper(bytes, off) == e.helper);
  CHECK(off == bytes.size());

  auto two = bytes;
  two.insert(two.end(), bytes.begin(), bytes.end());
  CHECK(parse_helpers(two).size() == 2);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(parse_helpers(truncated), HelperFormatError);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(parse_helpers(bad), HelperFormatError);
  auto version = bytes;
  version[4] = 7;
  CHECK_THROWS_AS(parse_helpers(version), HelperFormatError);
  CHECK_THROWS_AS(parse_helpers(std::vector<std::uint8_t>{}), HelperFormatError);
}

}  // TEST_SUITE
