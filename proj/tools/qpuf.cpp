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

// qpuf: command-line driver for quaternary PUF key generation experiments.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "qpuf/artifacts.hpp"
#include "qpuf/config.hpp"
#include "qpuf/experiment.hpp"
#include "qpuf/parallel.hpp"
#include "qpuf/simd.hpp"

namespace fs = std::filesystem;
using namespace qpuf;

namespace {

constexpr std::uint64_t kMaxDeskFrames = 1000000;

struct Options {
  std::string config;
  std::string profile;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> frames;
  unsigned threads = 0;
  bool long_run = false;
  std::string isa;
  // per command
  std::string device, helper;
  bool replay = false;
  bool zero_noise = false;
};

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what) : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void progress(const std::string& msg) { std::cerr << "  " << msg << std::endl; }

ExperimentConfig load(const Options& o) {
  if (o.config.empty()) throw ConfigError({"--config is required"});
  return load_config(o.config);
}

fs::path profile_path(const Options& o, const ExperimentConfig& c) {
  return o.profile.empty() ? c.output_dir / "profile.json" : fs::path(o.profile);
}

Profile load_profile(const Options& o, const ExperimentConfig& c) {
  return stage("profile", [&] {
    Profile p = read_profile(profile_path(o, c));
    check_profile_matches(p, c);
    return p;
  });
}

void write_manifest(const ExperimentConfig& c, const RunManifest& m) {
  write_text(c.output_dir / ("manifest-" + m.command + ".json"), manifest_to_json(m).dump(2) + "\n");
}

int cmd_construct(const Options& o) {
  ExperimentConfig c = load(o);
  if (o.seed) c.seed = *o.seed;
  if (o.frames) c.genie_frames = *o.frames;
  if (auto issues = check_config(c); !issues.empty()) throw ConfigError(issues);
  RunManifest m{"construct", config_hash(c), "", {}, {}};
  const Profile p = stage("construct", [&] { return build_profile(c, &m.stage_seconds); });
  const fs::path out = profile_path(o, c);
  stage("write", [&] { write_profile(out, p); return 0; });
  m.construction_sha256 = to_hex(construction_hash(p.construction));
  m.outputs.push_back(out.string());
  write_manifest(c, m);

  std::size_t below4 = 0, below3 = 0;
  for (double e : p.construction.error_rate) {
    below4 += e < 1e-4;
    below3 += e < 1e-3;
  }
  std::printf("profile %s\n", out.string().c_str());
  std::printf("construction %s\n", m.construction_sha256.c_str());
  std::printf("N=%zu frames=%llu channel=%s positions<1e-3: %zu positions<1e-4: %zu\n", p.construction.block_length,
              static_cast<unsigned long long>(p.construction.frames_used), channel_kind_name(p.channel_kind), below3,
              below4);
  return 0;
}

int cmd_enroll(const Options& o) {
  const ExperimentConfig c = load(o);
  const Profile p = load_profile(o, c);
  const std::uint64_t seed = o.seed.value_or(c.seed);
  const auto t0 = std::chrono::steady_clock::now();
  const EnrollOutcome e = stage("enroll", [&] { return run_enroll(c, p, seed); });
  const fs::path dev = o.device.empty() ? c.output_dir / "device.qpuf" : fs::path(o.device);
  const fs::path hlp = o.helper.empty() ? c.output_dir / "helper.qfe" : fs::path(o.helper);
  stage("write", [&] {
    write_file(dev, serialize_puf_array(e.device));
    std::vector<std::uint8_t> bytes;
    for (const auto& h : e.helpers) {
      const auto rec = serialize_helper(h);
      bytes.insert(bytes.end(), rec.begin(), rec.end());
    }
    write_file(hlp, bytes);
    return 0;
  });
  write_manifest(c, {"enroll", config_hash(c), to_hex(construction_hash(p.construction)),
                     {{"enroll", since(t0)}}, {dev.string(), hlp.string()}});
  std::fprintf(stderr, "device %s\nhelper %s (%zu block%s)\n", dev.string().c_str(), hlp.string().c_str(),
               e.helpers.size(), e.helpers.size() == 1 ? "" : "s");
  std::printf("%s\n", e.key.hex().c_str());
  return 0;
}

int cmd_reconstruct(const Options& o) {
  const ExperimentConfig c = load(o);
  const Profile p = load_profile(o, c);
  const fs::path dev = o.device.empty() ? c.output_dir / "device.qpuf" : fs::path(o.device);
  const fs::path hlp = o.helper.empty() ? c.output_dir / "helper.qfe" : fs::path(o.helper);
  const auto device = stage("read", [&] { return parse_puf_array(read_file(dev)); });
  const auto helpers = stage("read", [&] { return parse_helpers(read_file(hlp)); });
  const std::uint64_t eval_seed = o.seed.value_or(c.seed);
  const auto key = stage("reconstruct", [&] { return run_reconstruct(c, p, device, helpers, eval_seed, o.replay); });
  if (!key) {
    std::fprintf(stderr, "qpuf reconstruct: decoder produced no candidate\n");
    return 3;
  }
  std::printf("%s\n", key->hex().c_str());
  return 0;
}

int cmd_fer(const Options& o) {
  const ExperimentConfig c = load(o);
  const Profile p = load_profile(o, c);
  FerOptions f;
  f.frames = o.frames.value_or(c.fer_frames);
  f.seed = o.seed.value_or(c.seed);
  f.zero_noise = o.zero_noise;
  if (f.frames > kMaxDeskFrames && !o.long_run)
    throw StageError("fer", std::to_string(f.frames) + " frames is a long run; pass --long-run to enable it");
  if (o.long_run) {
    f.checkpoint = c.output_dir / "fer-checkpoint.json";
    f.chunk = 1 << 16;
  }
  f.progress = progress;
  const auto t0 = std::chrono::steady_clock::now();
  const FerResult r = stage("fer", [&] { return run_fer(c, p, f); });
  const auto report = fer_report(c, p, f, r);
  const fs::path out = c.output_dir / "fer.json";
  write_text(out, report.dump(2) + "\n");
  write_manifest(c, {"fer", config_hash(c), to_hex(construction_hash(p.construction)), {{"fer", since(t0)}},
                     {out.string()}});
  std::printf("%s", format_fer_summary(report).c_str());
  return 0;
}

int cmd_leakage(const Options& o) {
  const ExperimentConfig c = load(o);
  const Profile p = load_profile(o, c);
  LeakageOptions lo;
  lo.long_run = o.long_run;
  if (o.long_run) lo.checkpoint_dir = c.output_dir;
  lo.progress = progress;
  const auto rows = stage("leakage", [&] { return run_leakage(c, p, lo); });
  const auto report = leakage_report(c, p, rows);
  const fs::path out = c.output_dir / "leakage.json";
  write_text(out, report.dump(2) + "\n");
  RunManifest m{"leakage", config_hash(c), to_hex(construction_hash(p.construction)), {}, {out.string()}};
  for (std::size_t i = 0; i < rows.size(); ++i)
    m.stage_seconds.emplace_back("row" + std::to_string(i) + "-mask" + std::to_string(rows[i].mask), rows[i].seconds);
  write_manifest(c, m);
  std::printf("%s", format_leakage_table(report).c_str());
  for (const auto& r : rows) std::fprintf(stderr, "  mask %zu p0 %.3f: %.2f s\n", r.mask, r.row.p0, r.seconds);
  return 0;
}

int cmd_report(const Options& o) {
  const ExperimentConfig c = load(o);
  int status = 0;
  bool any = false;
  auto show = [&](const char* name, auto validate, auto format) {
    const fs::path path = c.output_dir / name;
    if (!fs::exists(path)) return;
    any = true;
    const auto bytes = read_file(path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::exception& e) {
      std::fprintf(stderr, "%s: %s\n", path.string().c_str(), e.what());
      status = 1;
      return;
    }
    const auto issues = validate(j);
    for (const auto& i : issues) std::fprintf(stderr, "%s: %s\n", path.string().c_str(), i.c_str());
    if (!issues.empty()) {
      status = 1;
      return;
    }
    if (j.value("config_sha256", "") != config_hash(c))
      std::fprintf(stderr, "%s: note: produced under a different configuration\n", path.string().c_str());
    std::printf("== %s\n%s", name, format(j).c_str());
  };
  show("leakage.json", validate_leakage_report, format_leakage_table);
  show("fer.json", validate_fer_report, format_fer_summary);
  if (!any) {
    std::fprintf(stderr, "no reports under %s; run `qpuf leakage` or `qpuf fer` first\n", c.output_dir.string().c_str());
    return 1;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternary PUF key generation with wiretap polar coding"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "Experiment configuration (TOML)");
  app.add_option("--profile", o.profile, "Construction profile (default: <output dir>/profile.json)");
  app.add_option("--seed", o.seed, "Override the run seed");
  app.add_option("--frames", o.frames, "Monte Carlo frames (construct: genie frames, fer: frames)");
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  app.add_flag("--long-run", o.long_run, "Allow long runs (checkpointed)");
  app.add_option("--isa", o.isa, "Force kernel variant")->check(CLI::IsMember({"scalar", "avx2"}));
  app.add_flag_callback("--version", [] {
    std::printf("qpuf %s\n", tool_version().c_str());
    throw CLI::Success();
  });

  auto* construct = app.add_subcommand("construct", "Estimate the channel and build the code construction");
  auto* enroll = app.add_subcommand("enroll", "Simulate a device, enroll a key, write helper data");
  enroll->add_option("--device", o.device, "PUF array output");
  enroll->add_option("--helper", o.helper, "Helper data output");
  auto* reconstruct = app.add_subcommand("reconstruct", "Re-read a device and reconstruct its key");
  reconstruct->add_option("--device", o.device, "PUF array input");
  reconstruct->add_option("--helper", o.helper, "Helper data input");
  reconstruct->add_flag("--replay", o.replay, "Reuse the enrollment evaluations (no fresh noise)");
  auto* fer = app.add_subcommand("fer", "Estimate the key reconstruction failure rate");
  fer->add_flag("--zero-noise", o.zero_noise, "Reconstruct from the enrollment responses");
  auto* leakage = app.add_subcommand("leakage", "Secrecy leakage bounds for the configured rows");
  auto* report = app.add_subcommand("report", "Validate and print saved reports");
  auto* config = app.add_subcommand("default-config", "Print the default configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    set_max_threads(o.threads);
    if (!o.isa.empty()) simd::set_active_isa(o.isa == "avx2" ? simd::Isa::kAvx2 : simd::Isa::kScalar);
    if (*config) {
      std::printf("%s", default_config_toml().c_str());
      return 0;
    }
    if (*construct) return cmd_construct(o);
    if (*enroll) return cmd_enroll(o);
    if (*reconstruct) return cmd_reconstruct(o);
    if (*fer) return cmd_fer(o);
    if (*leakage) return cmd_leakage(o);
    if (*report) return cmd_report(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "qpuf: %s\n", e.what());
    return 2;
  } catch (const StageError& e) {
    std::fprintf(stderr, "qpuf [%s]: %s\n", e.stage().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qpuf: %s\n", e.what());
    return 1;
  }
  return 0;
}
