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

#ifndef QPUF_ARTIFACTS_HPP
#define QPUF_ARTIFACTS_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpuf/channel_model.hpp"
#include "qpuf/config.hpp"
#include "qpuf/polar.hpp"
#include "qpuf/puf_model.hpp"
#include "qpuf/quantizer.hpp"

namespace qpuf {

class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Persisted code construction plus everything needed to reproduce it.
struct Profile {
  nlohmann::json source;  // config fields the construction depends on
  QuantizerThresholds thresholds;
  TransitionMatrix main_channel;
  ResponseDistribution input_masses;
  ChannelKind channel_kind = ChannelKind::kAdditive;
  CodeConstruction construction;
  unsigned frozen_value = 0;
};

/// Config fields that determine the construction; a profile is usable with
/// a config exactly when these match.
nlohmann::json profile_source(const ExperimentConfig& c);

/// JSON with "content_sha256" over the canonical dump of all other fields.
nlohmann::json profile_to_json(const Profile& p);
/// Verifies the content digest and the construction. Throws ArtifactError.
Profile profile_from_json(const nlohmann::json& j);

void write_profile(const std::filesystem::path& path, const Profile& p);
Profile read_profile(const std::filesystem::path& path);
/// Throws ArtifactError if the profile was not built from `c`.
void check_profile_matches(const Profile& p, const ExperimentConfig& c);

/// Simulated device: per-cell one-probabilities plus the model that drew them.
struct PufArray {
  PufModelParams params;
  std::uint64_t seed = 0;
  std::vector<PufCell> cells;
};

inline constexpr std::uint8_t kPufArrayVersion = 1;

/// "QPUF", version, lambda1, lambda2 (f64), seed, count (u64), count f64; little endian.
std::vector<std::uint8_t> serialize_puf_array(const PufArray& a);
PufArray parse_puf_array(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Stage timings and hashes of a run; the only file that carries wall-clock data.
struct RunManifest {
  std::string command;
  std::string config_sha256;
  std::string construction_sha256;
  std::vector<std::pair<std::string, double>> stage_seconds;
  std::vector<std::string> outputs;
};

nlohmann::json manifest_to_json(const RunManifest& m);

/// Schema checks for the JSON reports; returns one message per violation.
std::vector<std::string> validate_leakage_report(const nlohmann::json& j);
std::vector<std::string> validate_fer_report(const nlohmann::json& j);

std::string tool_version();

}  // namespace qpuf

#endif  // QPUF_ARTIFACTS_HPP
