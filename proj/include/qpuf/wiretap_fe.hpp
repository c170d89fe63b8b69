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

#ifndef QPUF_WIRETAP_FE_HPP
#define QPUF_WIRETAP_FE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpuf/gf4.hpp"
#include "qpuf/polar.hpp"

namespace qpuf {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(std::span<const std::uint8_t> data);
std::string to_hex(std::span<const std::uint8_t> bytes);

/// Digest over a canonical binary encoding of the construction; quoted in
/// helper data so a helper cannot be decoded against a different code.
Sha256Digest construction_hash(const CodeConstruction& c);

/// Mask (R), secret (S) and frozen (F) source positions.
struct WiretapPartition {
  std::size_t length = 0;
  std::vector<std::uint32_t> mask, secret, frozen;
};

/// R = first r of the reliability order, S = next s, F = rest.
WiretapPartition partition(const CodeConstruction& c, std::size_t r, std::size_t s);

struct SecretSeed {
  Gf4Vector symbols;
};

inline constexpr std::uint8_t kKdfSha256Truncated = 1;
inline constexpr std::size_t kDefaultKeyBits = 128;
inline constexpr std::size_t kSaltBytes = 16;

struct HelperData {
  Gf4Vector payload;  // x + q
  Sha256Digest construction_hash{};
  std::uint16_t r = 0, s = 0;
  std::uint8_t kdf_id = kKdfSha256Truncated;
  std::vector<std::uint8_t> salt;

  friend bool operator==(const HelperData&, const HelperData&) = default;
};

struct EnrolledKey {
  std::vector<std::uint8_t> bytes;
  std::string hex() const { return to_hex(bytes); }
  std::size_t bits() const { return 8 * bytes.size(); }
  friend bool operator==(const EnrolledKey&, const EnrolledKey&) = default;
};

/// SHA-256(kdf_id || salt || packed seed) truncated to key_bits (multiple of 8, <= 256).
EnrolledKey kdf(const Gf4Vector& seed, std::span<const std::uint8_t> salt, std::uint8_t kdf_id = kKdfSha256Truncated,
                std::size_t key_bits = kDefaultKeyBits);

struct Enrollment {
  HelperData helper;
  EnrolledKey key;
};

/// Places a uniform mask (drawn from rng_seed) on R, the seed on S and zeros
/// on F, encodes and publishes x + q. The salt is drawn from rng_seed as well.
Enrollment enroll(const SecretSeed& seed, const Gf4Vector& q, const WiretapPartition& p, const CodeConstruction& c,
                  std::uint64_t rng_seed, std::size_t key_bits = kDefaultKeyBits);

class HelperMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decodes y = payload + q_new and returns the S positions of the best
/// candidate, or nothing if the decoder produced no candidate. Throws
/// HelperMismatchError if the helper was made for a different construction
/// or partition.
std::optional<Gf4Vector> reconstruct_seed(const HelperData& h, const Gf4Vector& q_new, const CodeConstruction& c,
                                          SclDecoder& decoder);

std::optional<EnrolledKey> reconstruct(const HelperData& h, const Gf4Vector& q_new, const CodeConstruction& c,
                                       const DecoderConfig& config = {}, std::size_t key_bits = kDefaultKeyBits);

/// Keys spanning several code blocks: per-block helpers share one salt and
/// the KDF runs over the concatenated seeds. q holds blocks * N responses.
struct MultiBlockEnrollment {
  std::vector<HelperData> helpers;
  EnrolledKey key;
};

MultiBlockEnrollment enroll_blocks(std::span<const SecretSeed> seeds, const Gf4Vector& q, const WiretapPartition& p,
                                   const CodeConstruction& c, std::uint64_t rng_seed,
                                   std::size_t key_bits = kDefaultKeyBits);

std::optional<EnrolledKey> reconstruct_blocks(std::span<const HelperData> helpers, const Gf4Vector& q_new,
                                              const CodeConstruction& c, const DecoderConfig& config = {},
                                              std::size_t key_bits = kDefaultKeyBits);

/// blocks * floor(2 s - 2 bound).
std::size_t key_bits_budget(std::size_t s_symbols, double leakage_bound, std::size_t blocks = 1);

// Helper-data records: "QFE1", version, construction hash, N (u32 BE),
// r and s (u16 BE), kdf id, salt length and salt, payload at 2 bits/symbol.

inline constexpr std::uint8_t kHelperVersion = 1;

class HelperFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> serialize_helper(const HelperData& h);
/// Parses one record starting at `offset` and advances it.
HelperData parse_helper(std::span<const std::uint8_t> bytes, std::size_t& offset);
/// Parses a file of one or more concatenated records.
std::vector<HelperData> parse_helpers(std::span<const std::uint8_t> bytes);

}  // namespace qpuf

#endif  // QPUF_WIRETAP_FE_HPP
