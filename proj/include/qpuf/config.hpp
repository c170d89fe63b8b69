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

#ifndef QPUF_CONFIG_HPP
#define QPUF_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qpuf/puf_model.hpp"
#include "qpuf/quantizer.hpp"

namespace qpuf {

enum class ChannelKind {
  kAdditive,  ///< noise e = q + q' seen at reconstruction (derived from W_m and the masses)
  kMain,      ///< the estimated W_m itself
};

const char* channel_kind_name(ChannelKind k);

/// One Table-I style row: masses (symmetric in p0 unless given) and mask length.
struct LeakageRow {
  double p0 = 0.25;
  std::optional<ResponseDistribution> masses;
  std::size_t mask = 0;

  ResponseDistribution distribution() const;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;

  PufModelParams puf;
  std::uint32_t trials = 1000;
  std::uint64_t estimation_cells = 1000000;

  std::optional<QuantizerThresholds> thresholds;
  ResponseDistribution target_masses;  // used when thresholds are not given

  std::size_t n = 256;
  std::size_t mask = 0;
  std::size_t secret = 64;
  unsigned list_size = 4;
  double llr_clamp = 500.0;
  ChannelKind channel = ChannelKind::kAdditive;
  std::uint64_t genie_frames = 100000;
  std::size_t key_bits = 128;
  std::size_t blocks = 1;

  std::uint64_t fer_frames = 10000;

  unsigned enumeration_cap = 16;
  std::vector<LeakageRow> leakage_rows;

  std::filesystem::path output_dir = "qpuf-out";

  /// Rows of the comparison table: uniform without mask, then biased rows.
  static std::vector<LeakageRow> default_leakage_rows();

  /// Thresholds in effect (explicit, or derived from the target masses).
  QuantizerThresholds effective_thresholds() const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Parses and validates TOML text. Every problem found is reported at once.
ExperimentConfig parse_config(std::string_view toml_text, std::string_view source_name = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Semantic checks on a config built in code; same rules as parse_config.
std::vector<std::string> check_config(const ExperimentConfig& c);

/// Canonical JSON form (sorted keys) and its SHA-256.
nlohmann::json config_to_json(const ExperimentConfig& c);
std::string config_hash(const ExperimentConfig& c);

/// Annotated default configuration as TOML.
std::string default_config_toml();

}  // namespace qpuf

#endif  // QPUF_CONFIG_HPP
