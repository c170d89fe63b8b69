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

#ifndef QPUF_EXPERIMENT_HPP
#define QPUF_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpuf/artifacts.hpp"
#include "qpuf/config.hpp"
#include "qpuf/leakage.hpp"
#include "qpuf/wiretap_fe.hpp"

namespace qpuf {

using ProgressFn = std::function<void(const std::string&)>;

/// Estimates W_m, picks the decoding channel and runs the genie construction.
/// `timings` (optional) receives per-stage wall-clock seconds.
Profile build_profile(const ExperimentConfig& c, std::vector<std::pair<std::string, double>>* timings = nullptr);

/// Fresh simulated device of N * blocks cells.
PufArray make_device(const ExperimentConfig& c, std::uint64_t device_seed);

/// One extraction: `trials` evaluations per cell on stream (seed, domain), then quantization.
Gf4Vector extract_responses(std::span<const PufCell> cells, std::uint32_t trials, const QuantizerThresholds& t,
                            std::uint64_t seed, std::uint64_t domain);

struct EnrollOutcome {
  PufArray device;
  std::vector<HelperData> helpers;
  EnrolledKey key;
};

/// Device, secret seed, mask and salt all derive from `seed`.
EnrollOutcome run_enroll(const ExperimentConfig& c, const Profile& p, std::uint64_t seed);

/// Re-reads the device (fresh evaluations from eval_seed, or the enrollment
/// evaluations when replay is set) and reconstructs the key.
std::optional<EnrolledKey> run_reconstruct(const ExperimentConfig& c, const Profile& p, const PufArray& device,
                                           std::span<const HelperData> helpers, std::uint64_t eval_seed,
                                           bool replay_enrollment);

/// Two-sided Clopper-Pearson interval for k successes in n trials.
std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence = 0.95);

struct FerOptions {
  std::uint64_t frames = 10000;
  std::uint64_t seed = 1;
  bool zero_noise = false;
  std::optional<std::filesystem::path> checkpoint;  // resumable state, saved after every chunk
  std::uint64_t chunk = 4096;
  ProgressFn progress;
};

struct FerResult {
  std::uint64_t frames = 0;
  std::uint64_t failures = 0;
  double rate = 0.0;
  double ci_low = 0.0, ci_high = 1.0;
};

/// Full enroll + reconstruct per frame on fresh devices.
FerResult run_fer(const ExperimentConfig& c, const Profile& p, const FerOptions& o);
nlohmann::json fer_report(const ExperimentConfig& c, const Profile& p, const FerOptions& o, const FerResult& r);

struct LeakageRowResult {
  LeakageRow row;
  ResponseDistribution masses;
  double entropy = 0.0;
  std::size_t mask = 0, secret = 0;
  std::string status;  // "ok", "not applicable", "skipped"
  std::string note;
  std::optional<LeakageBound> bound;
  std::optional<std::size_t> key_bits_per_block, blocks;
  double seconds = 0.0;
};

struct LeakageOptions {
  bool long_run = false;  // required for masks above kQuickMaskLimit
  std::optional<std::filesystem::path> checkpoint_dir;
  ProgressFn progress;
};

inline constexpr std::size_t kQuickMaskLimit = 15;

/// Weight histogram of the first `mask` positions of the reliability order.
WeightHistogram mask_histogram(const CodeConstruction& c, std::size_t mask, unsigned cap,
                               const std::optional<std::filesystem::path>& checkpoint = std::nullopt,
                               const ProgressFn& progress = {});

std::vector<LeakageRowResult> run_leakage(const ExperimentConfig& c, const Profile& p, const LeakageOptions& o);
nlohmann::json leakage_report(const ExperimentConfig& c, const Profile& p, const std::vector<LeakageRowResult>& rows);

std::string format_leakage_table(const nlohmann::json& report);
std::string format_fer_summary(const nlohmann::json& report);

}  // namespace qpuf

#endif  // QPUF_EXPERIMENT_HPP
