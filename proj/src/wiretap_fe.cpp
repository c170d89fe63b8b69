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

#include "qpuf/wiretap_fe.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cmath>
#include <cstring>

#include "qpuf/rng.hpp"

namespace qpuf {
namespace {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { be(v, 2); }
  void u32(std::uint32_t v) { be(v, 4); }
  void u64(std::uint64_t v) { be(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t>& data() { return out_; }

 private:
  void be(std::uint64_t v, int n) {
    for (int i = n - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> b, std::size_t off) : b_(b), off_(off) {}
  std::uint64_t be(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v = (v << 8) | b_[off_++];
    return v;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = b_.subspan(off_, n);
    off_ += n;
    return s;
  }
  std::size_t offset() const { return off_; }

 private:
  void need(std::size_t n) const {
    if (b_.size() - off_ < n)
      throw HelperFormatError("helper data truncated at offset " + std::to_string(off_));
  }
  std::span<const std::uint8_t> b_;
  std::size_t off_;
};

std::vector<std::uint8_t> random_bytes(std::uint64_t seed, std::size_t n) {
  Xoshiro256 rng(derive_seed(seed, stream::kSalt));
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(rng() >> 56);
  return out;
}

void check_partition(const WiretapPartition& p, const CodeConstruction& c) {
  if (p.length != c.block_length || p.mask.size() + p.secret.size() + p.frozen.size() != c.block_length)
    throw std::invalid_argument("partition does not match construction");
}

HelperData enroll_block(const Gf4Vector& seed, const Gf4Vector& q, const WiretapPartition& p,
                        const CodeConstruction& c, const Sha256Digest& hash, std::uint64_t mask_seed,
                        const std::vector<std::uint8_t>& salt) {
  check_partition(p, c);
  if (q.size() != c.block_length) throw std::invalid_argument("enroll: response length must equal N");
  if (seed.size() != p.secret.size()) throw std::invalid_argument("enroll: seed length must equal |S|");
  Gf4Vector u(c.block_length);
  Xoshiro256 rng(mask_seed);
  for (auto i : p.mask) u[i] = Gf4(rng.symbol());
  for (std::size_t k = 0; k < p.secret.size(); ++k) u[p.secret[k]] = seed[k];
  HelperData h;
  h.payload = vec_add(polar_encode(u), q);
  h.construction_hash = hash;
  h.r = static_cast<std::uint16_t>(p.mask.size());
  h.s = static_cast<std::uint16_t>(p.secret.size());
  h.kdf_id = kKdfSha256Truncated;
  h.salt = salt;
  return h;
}

Gf4Vector concat(std::span<const Gf4Vector> parts) {
  std::vector<Gf4> all;
  for (const auto& v : parts) all.insert(all.end(), v.begin(), v.end());
  return Gf4Vector(std::move(all));
}

Gf4Vector slice(const Gf4Vector& v, std::size_t begin, std::size_t n) {
  return Gf4Vector(std::vector<Gf4>(v.begin() + static_cast<std::ptrdiff_t>(begin),
                                    v.begin() + static_cast<std::ptrdiff_t>(begin + n)));
}

}  // namespace

Sha256Digest sha256(std::span<const std::uint8_t> data) {
  Sha256Digest d{};
  unsigned len = 0;
  if (EVP_Digest(data.data(), data.size(), d.data(), &len, EVP_sha256(), nullptr) != 1 || len != d.size())
    throw std::runtime_error("SHA-256 failed");
  return d;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(2 * bytes.size());
  for (auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

Sha256Digest construction_hash(const CodeConstruction& c) {
  ByteWriter w;
  w.str("qpuf-construction-v1");
  w.str(c.kernel_id);
  w.u64(c.block_length);
  w.u64(c.frames_used);
  for (const auto& row : c.channel.rows())
    for (double v : row) w.f64(v);
  for (double e : c.error_rate) w.f64(e);
  for (auto i : c.reliability_order) w.u32(i);
  return sha256(w.data());
}

WiretapPartition partition(const CodeConstruction& c, std::size_t r, std::size_t s) {
  if (r + s > c.block_length) throw std::invalid_argument("partition: r + s exceeds block length");
  if (c.reliability_order.size() != c.block_length) throw std::invalid_argument("partition: construction has no order");
  WiretapPartition p;
  p.length = c.block_length;
  const auto& o = c.reliability_order;
  p.mask.assign(o.begin(), o.begin() + static_cast<std::ptrdiff_t>(r));
  p.secret.assign(o.begin() + static_cast<std::ptrdiff_t>(r), o.begin() + static_cast<std::ptrdiff_t>(r + s));
  p.frozen.assign(o.begin() + static_cast<std::ptrdiff_t>(r + s), o.end());
  return p;
}

EnrolledKey kdf(const Gf4Vector& seed, std::span<const std::uint8_t> salt, std::uint8_t kdf_id, std::size_t key_bits) {
  if (kdf_id != kKdfSha256Truncated) throw std::invalid_argument("unknown KDF id " + std::to_string(kdf_id));
  if (key_bits == 0 || key_bits % 8 != 0 || key_bits > 256)
    throw std::invalid_argument("key length must be a positive multiple of 8 up to 256 bits");
  ByteWriter w;
  w.u8(kdf_id);
  w.bytes(salt);
  w.bytes(seed.pack());
  const Sha256Digest d = sha256(w.data());
  return EnrolledKey{std::vector<std::uint8_t>(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(key_bits / 8))};
}

Enrollment enroll(const SecretSeed& seed, const Gf4Vector& q, const WiretapPartition& p, const CodeConstruction& c,
                  std::uint64_t rng_seed, std::size_t key_bits) {
  const auto salt = random_bytes(rng_seed, kSaltBytes);
  Enrollment e;
  e.helper = enroll_block(seed.symbols, q, p, c, construction_hash(c), derive_seed(rng_seed, stream::kMask, 0), salt);
  e.key = kdf(seed.symbols, salt, kKdfSha256Truncated, key_bits);
  return e;
}

std::optional<Gf4Vector> reconstruct_seed(const HelperData& h, const Gf4Vector& q_new, const CodeConstruction& c,
                                          SclDecoder& decoder) {
  if (h.construction_hash != construction_hash(c))
    throw HelperMismatchError("helper data was enrolled against a different construction");
  if (h.payload.size() != c.block_length || static_cast<std::size_t>(h.r) + h.s > c.block_length)
    throw HelperMismatchError("helper data does not fit the construction");
  if (q_new.size() != c.block_length) throw std::invalid_argument("reconstruct: response length must equal N");
  if (decoder.block_length() != c.block_length) throw std::invalid_argument("reconstruct: decoder length mismatch");
  const WiretapPartition p = partition(c, h.r, h.s);
  FrozenSymbols frozen(c.block_length);
  for (auto i : p.frozen) frozen[i] = Gf4::zero();
  const Gf4Vector y = vec_add(h.payload, q_new);
  const auto cands = decoder.decode(channel_llrs(y, c.channel, decoder.config().llr_clamp), frozen);
  if (cands.empty()) return std::nullopt;
  Gf4Vector seed(p.secret.size());
  for (std::size_t k = 0; k < p.secret.size(); ++k) seed[k] = cands.front().u[p.secret[k]];
  return seed;
}

std::optional<EnrolledKey> reconstruct(const HelperData& h, const Gf4Vector& q_new, const CodeConstruction& c,
                                       const DecoderConfig& config, std::size_t key_bits) {
  SclDecoder dec(c.block_length, config);
  const auto seed = reconstruct_seed(h, q_new, c, dec);
  if (!seed) return std::nullopt;
  return kdf(*seed, h.salt, h.kdf_id, key_bits);
}

MultiBlockEnrollment enroll_blocks(std::span<const SecretSeed> seeds, const Gf4Vector& q, const WiretapPartition& p,
                                   const CodeConstruction& c, std::uint64_t rng_seed, std::size_t key_bits) {
  const std::size_t n = c.block_length;
  if (seeds.empty()) throw std::invalid_argument("enroll: at least one block required");
  if (q.size() != seeds.size() * n) throw std::invalid_argument("enroll: response length must equal blocks * N");
  const auto salt = random_bytes(rng_seed, kSaltBytes);
  const auto hash = construction_hash(c);
  MultiBlockEnrollment e;
  std::vector<Gf4Vector> parts;
  for (std::size_t b = 0; b < seeds.size(); ++b) {
    e.helpers.push_back(
        enroll_block(seeds[b].symbols, slice(q, b * n, n), p, c, hash, derive_seed(rng_seed, stream::kMask, b), salt));
    parts.push_back(seeds[b].symbols);
  }
  e.key = kdf(concat(parts), salt, kKdfSha256Truncated, key_bits);
  return e;
}

std::optional<EnrolledKey> reconstruct_blocks(std::span<const HelperData> helpers, const Gf4Vector& q_new,
                                              const CodeConstruction& c, const DecoderConfig& config,
                                              std::size_t key_bits) {
  const std::size_t n = c.block_length;
  if (helpers.empty()) throw std::invalid_argument("reconstruct: no helper records");
  if (q_new.size() != helpers.size() * n) throw std::invalid_argument("reconstruct: response length must equal blocks * N");
  for (const auto& h : helpers)
    if (h.salt != helpers.front().salt || h.kdf_id != helpers.front().kdf_id)
      throw HelperMismatchError("helper blocks disagree on salt or KDF");
  SclDecoder dec(n, config);
  std::vector<Gf4Vector> parts;
  for (std::size_t b = 0; b < helpers.size(); ++b) {
    auto s = reconstruct_seed(helpers[b], slice(q_new, b * n, n), c, dec);
    if (!s) return std::nullopt;
    parts.push_back(std::move(*s));
  }
  return kdf(concat(parts), helpers.front().salt, helpers.front().kdf_id, key_bits);
}

std::size_t key_bits_budget(std::size_t s_symbols, double leakage_bound, std::size_t blocks) {
  if (!(leakage_bound >= 0.0)) throw std::invalid_argument("leakage bound must be >= 0");
  const double per = std::floor(2.0 * static_cast<double>(s_symbols) - 2.0 * leakage_bound);
  return per <= 0.0 ? 0 : blocks * static_cast<std::size_t>(per);
}

std::vector<std::uint8_t> serialize_helper(const HelperData& h) {
  if (h.salt.size() > 255) throw std::invalid_argument("salt longer than 255 bytes");
  if (h.payload.size() > 0xffffffffu) throw std::invalid_argument("payload too long");
  ByteWriter w;
  for (char ch : std::string("QFE1")) w.u8(static_cast<std::uint8_t>(ch));
  w.u8(kHelperVersion);
  w.bytes(h.construction_hash);
  w.u32(static_cast<std::uint32_t>(h.payload.size()));
  w.u16(h.r);
  w.u16(h.s);
  w.u8(h.kdf_id);
  w.u8(static_cast<std::uint8_t>(h.salt.size()));
  w.bytes(h.salt);
  w.bytes(h.payload.pack());
  return std::move(w.data());
}

HelperData parse_helper(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  ByteReader r(bytes, offset);
  const auto magic = r.take(4);
  if (std::memcmp(magic.data(), "QFE1", 4) != 0) throw HelperFormatError("bad helper magic");
  const auto version = r.be(1);
  if (version != kHelperVersion) throw HelperFormatError("unsupported helper version " + std::to_string(version));
  HelperData h;
  const auto hash = r.take(32);
  std::copy(hash.begin(), hash.end(), h.construction_hash.begin());
  const auto n = static_cast<std::size_t>(r.be(4));
  h.r = static_cast<std::uint16_t>(r.be(2));
  h.s = static_cast<std::uint16_t>(r.be(2));
  if (static_cast<std::size_t>(h.r) + h.s > n) throw HelperFormatError("helper r + s exceeds N");
  h.kdf_id = static_cast<std::uint8_t>(r.be(1));
  const auto salt_len = static_cast<std::size_t>(r.be(1));
  const auto salt = r.take(salt_len);
  h.salt.assign(salt.begin(), salt.end());
  const auto payload = r.take((n + 3) / 4);
  h.payload = Gf4Vector::unpack(payload, n);
  offset = r.offset();
  return h;
}

std::vector<HelperData> parse_helpers(std::span<const std::uint8_t> bytes) {
  std::vector<HelperData> out;
  std::size_t off = 0;
  while (off < bytes.size()) out.push_back(parse_helper(bytes, off));
  if (out.empty()) throw HelperFormatError("empty helper file");
  return out;
}

}  // namespace qpuf
