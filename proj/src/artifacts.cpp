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

#include "qpuf/artifacts.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "qpuf/wiretap_fe.hpp"

namespace qpuf {
namespace {

using nlohmann::json;

std::string digest_hex(const std::string& s) {
  return to_hex(sha256({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}));
}

json matrix_json(const TransitionMatrix& m) {
  json rows = json::array();
  for (const auto& r : m.rows()) rows.push_back(r);
  return rows;
}

TransitionMatrix matrix_from(const json& j) {
  TransitionMatrix::Rows r{};
  if (!j.is_array() || j.size() != 4) throw ArtifactError("profile: channel must be a 4x4 array");
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 4) throw ArtifactError("profile: channel must be a 4x4 array");
    for (std::size_t k = 0; k < 4; ++k) r[i][k] = j[i][k].get<double>();
  }
  return TransitionMatrix(r);
}

// Little-endian primitives for the PUF array container.
void put_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
std::uint64_t get_le(const std::vector<std::uint8_t>& in, std::size_t off) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in[off + static_cast<std::size_t>(i)];
  return v;
}

void require(std::vector<std::string>& issues, const json& j, const std::string& key, json::value_t type,
             const std::string& where) {
  if (!j.contains(key)) {
    issues.push_back(where + key + ": missing");
    return;
  }
  const auto& v = j.at(key);
  const bool ok = type == json::value_t::number_float ? v.is_number()
                  : type == json::value_t::number_unsigned ? v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)
                  : v.type() == type;
  if (!ok) issues.push_back(where + key + ": wrong type");
}

void require_nullable_number(std::vector<std::string>& issues, const json& j, const std::string& key,
                             const std::string& where) {
  if (!j.contains(key)) issues.push_back(where + key + ": missing");
  else if (!j.at(key).is_null() && !j.at(key).is_number()) issues.push_back(where + key + ": wrong type");
}

}  // namespace

json profile_source(const ExperimentConfig& c) {
  json j;
  j["lambda1"] = c.puf.lambda1;
  j["lambda2"] = c.puf.lambda2;
  j["trials"] = c.trials;
  j["estimation_cells"] = c.estimation_cells;
  if (c.thresholds) j["thresholds"] = {c.thresholds->a, c.thresholds->b, c.thresholds->c};
  else j["target_masses"] = c.target_masses.p;
  j["n"] = c.n;
  j["channel"] = channel_kind_name(c.channel);
  j["genie_frames"] = c.genie_frames;
  j["construction_seed"] = c.seed;
  return j;
}

json profile_to_json(const Profile& p) {
  const auto& c = p.construction;
  json j;
  j["format"] = "qpuf-profile";
  j["version"] = 1;
  j["source"] = p.source;
  j["thresholds"] = {p.thresholds.a, p.thresholds.b, p.thresholds.c};
  j["main_channel"] = matrix_json(p.main_channel);
  j["input_masses"] = p.input_masses.p;
  j["channel_kind"] = channel_kind_name(p.channel_kind);
  j["construction"] = {{"kernel_id", c.kernel_id},
                       {"n", c.block_length},
                       {"frames_used", c.frames_used},
                       {"channel", matrix_json(c.channel)},
                       {"error_rate", c.error_rate},
                       {"reliability_order", c.reliability_order},
                       {"frozen_value", p.frozen_value},
                       {"sha256", to_hex(construction_hash(c))}};
  j["content_sha256"] = digest_hex(j.dump());
  return j;
}

Profile profile_from_json(const json& in) {
  try {
    json j = in;
    if (j.value("format", "") != "qpuf-profile") throw ArtifactError("not a qpuf profile");
    if (j.value("version", 0) != 1) throw ArtifactError("unsupported profile version");
    const std::string stated = j.at("content_sha256").get<std::string>();
    j.erase("content_sha256");
    if (digest_hex(j.dump()) != stated) throw ArtifactError("profile content digest mismatch (file modified?)");

    Profile p;
    p.source = j.at("source");
    const auto th = j.at("thresholds");
    p.thresholds = {th.at(0).get<double>(), th.at(1).get<double>(), th.at(2).get<double>()};
    p.main_channel = matrix_from(j.at("main_channel"));
    for (std::size_t i = 0; i < 4; ++i) p.input_masses.p[i] = j.at("input_masses").at(i).get<double>();
    const auto kind = j.at("channel_kind").get<std::string>();
    if (kind != "additive" && kind != "main") throw ArtifactError("profile: unknown channel kind " + kind);
    p.channel_kind = kind == "additive" ? ChannelKind::kAdditive : ChannelKind::kMain;
    const auto& cj = j.at("construction");
    auto& c = p.construction;
    c.kernel_id = cj.at("kernel_id").get<std::string>();
    c.block_length = cj.at("n").get<std::size_t>();
    c.frames_used = cj.at("frames_used").get<std::uint64_t>();
    c.channel = matrix_from(cj.at("channel"));
    c.error_rate = cj.at("error_rate").get<std::vector<double>>();
    c.reliability_order = cj.at("reliability_order").get<std::vector<std::uint32_t>>();
    p.frozen_value = cj.at("frozen_value").get<unsigned>();
    if (p.frozen_value > 3) throw ArtifactError("profile: frozen value out of range");
    c.validate();
    if (c.kernel_id != Kernel::rs4().id()) throw ArtifactError("profile: unsupported kernel " + c.kernel_id);
    if (cj.at("sha256").get<std::string>() != to_hex(construction_hash(c)))
      throw ArtifactError("profile: construction digest mismatch");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed profile: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ArtifactError(std::string("invalid profile: ") + e.what());
  }
}

void write_profile(const std::filesystem::path& path, const Profile& p) {
  write_text(path, profile_to_json(p).dump(2) + "\n");
}

Profile read_profile(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(path.string() + ": " + e.what());
  }
  return profile_from_json(j);
}

void check_profile_matches(const Profile& p, const ExperimentConfig& c) {
  json want = profile_source(c), have = p.source;
  want.erase("construction_seed");
  have.erase("construction_seed");
  if (want != have)
    throw ArtifactError("profile was built from a different configuration (source " + have.dump() +
                        ", config " + want.dump() + ")");
}

std::vector<std::uint8_t> serialize_puf_array(const PufArray& a) {
  std::vector<std::uint8_t> out{'Q', 'P', 'U', 'F', kPufArrayVersion};
  put_le(out, std::bit_cast<std::uint64_t>(a.params.lambda1));
  put_le(out, std::bit_cast<std::uint64_t>(a.params.lambda2));
  put_le(out, a.seed);
  put_le(out, a.cells.size());
  for (const auto& c : a.cells) put_le(out, std::bit_cast<std::uint64_t>(c.one_probability));
  return out;
}

PufArray parse_puf_array(const std::vector<std::uint8_t>& b) {
  constexpr std::size_t kHeader = 5 + 4 * 8;
  if (b.size() < kHeader || std::memcmp(b.data(), "QPUF", 4) != 0) throw ArtifactError("not a PUF array file");
  if (b[4] != kPufArrayVersion) throw ArtifactError("unsupported PUF array version " + std::to_string(b[4]));
  PufArray a;
  a.params.lambda1 = std::bit_cast<double>(get_le(b, 5));
  a.params.lambda2 = std::bit_cast<double>(get_le(b, 13));
  a.seed = get_le(b, 21);
  const std::uint64_t n = get_le(b, 29);
  if ((b.size() - kHeader) / 8 != n || (b.size() - kHeader) % 8 != 0) throw ArtifactError("PUF array size mismatch");
  a.cells.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = std::bit_cast<double>(get_le(b, kHeader + 8 * i));
    if (!(x >= 0.0 && x <= 1.0)) throw ArtifactError("PUF array: one-probability out of range");
    a.cells[i].one_probability = x;
  }
  return a;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ArtifactError("cannot write " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

json manifest_to_json(const RunManifest& m) {
  json stages = json::array();
  for (const auto& [name, s] : m.stage_seconds) stages.push_back({{"stage", name}, {"seconds", s}});
  return {{"tool", "qpuf"},
          {"version", tool_version()},
          {"command", m.command},
          {"config_sha256", m.config_sha256},
          {"construction_sha256", m.construction_sha256},
          {"stages", stages},
          {"outputs", m.outputs}};
}

std::vector<std::string> validate_leakage_report(const json& j) {
  std::vector<std::string> issues;
  if (!j.is_object()) return {"report: expected an object"};
  using V = json::value_t;
  if (j.value("kind", "") != "leakage") issues.push_back("kind: expected \"leakage\"");
  require(issues, j, "config_sha256", V::string, "");
  require(issues, j, "construction_sha256", V::string, "");
  require(issues, j, "n", V::number_unsigned, "");
  require(issues, j, "code_dimension", V::number_unsigned, "");
  require(issues, j, "key_bits", V::number_unsigned, "");
  require(issues, j, "rows", V::array, "");
  if (!j.contains("rows") || !j["rows"].is_array()) return issues;
  for (std::size_t i = 0; i < j["rows"].size(); ++i) {
    const auto& r = j["rows"][i];
    const std::string w = "rows[" + std::to_string(i) + "].";
    if (!r.is_object()) {
      issues.push_back(w + ": expected an object");
      continue;
    }
    require(issues, r, "p0", V::number_float, w);
    require(issues, r, "masses", V::array, w);
    if (r.contains("masses") && r["masses"].is_array() && r["masses"].size() != 4) issues.push_back(w + "masses: need 4 entries");
    require(issues, r, "entropy", V::number_float, w);
    require(issues, r, "mask", V::number_unsigned, w);
    require(issues, r, "secret", V::number_unsigned, w);
    require(issues, r, "status", V::string, w);
    require_nullable_number(issues, r, "bound_bits", w);
    require_nullable_number(issues, r, "raw_bound_bits", w);
    require_nullable_number(issues, r, "key_bits_per_block", w);
    require_nullable_number(issues, r, "blocks", w);
    const std::string st = r.value("status", "");
    if (st != "ok" && st != "not applicable" && st != "skipped") issues.push_back(w + "status: unknown value");
    if (st == "ok" && r.contains("bound_bits") && r["bound_bits"].is_number() && r["bound_bits"].get<double>() < 0.0)
      issues.push_back(w + "bound_bits: negative");
  }
  return issues;
}

std::vector<std::string> validate_fer_report(const json& j) {
  std::vector<std::string> issues;
  if (!j.is_object()) return {"report: expected an object"};
  using V = json::value_t;
  if (j.value("kind", "") != "fer") issues.push_back("kind: expected \"fer\"");
  for (const char* k : {"config_sha256", "construction_sha256"}) require(issues, j, k, V::string, "");
  for (const char* k : {"n", "mask", "secret", "list_size", "blocks", "frames", "failures", "seed"})
    require(issues, j, k, V::number_unsigned, "");
  for (const char* k : {"rate", "ci_low", "ci_high", "confidence"}) require(issues, j, k, V::number_float, "");
  require(issues, j, "zero_noise", V::boolean, "");
  if (issues.empty()) {
    const double lo = j["ci_low"], hi = j["ci_high"], rate = j["rate"];
    if (!(0.0 <= lo && lo <= rate && rate <= hi && hi <= 1.0)) issues.push_back("ci: expected 0 <= low <= rate <= high <= 1");
    if (j["failures"].get<std::uint64_t>() > j["frames"].get<std::uint64_t>()) issues.push_back("failures: exceeds frames");
  }
  return issues;
}

std::string tool_version() { return "0.1.0"; }

}  // namespace qpuf
