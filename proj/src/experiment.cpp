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

#include "qpuf/experiment.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "qpuf/channel_model.hpp"
#include "qpuf/parallel.hpp"
#include "qpuf/rng.hpp"
#include "qpuf/simd.hpp"

namespace qpuf {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

WiretapPartition config_partition(const ExperimentConfig& c, const Profile& p) {
  if (p.construction.block_length != c.n) throw ArtifactError("profile block length differs from config");
  return partition(p.construction, c.mask, c.secret);
}

std::vector<SecretSeed> draw_seeds(std::size_t blocks, std::size_t s, std::uint64_t seed) {
  Xoshiro256 rng(derive_seed(seed, stream::kSecretSeed));
  std::vector<SecretSeed> out(blocks);
  for (auto& b : out) {
    b.symbols = Gf4Vector(s);
    for (std::size_t i = 0; i < s; ++i) b.symbols[i] = Gf4(rng.symbol());
  }
  return out;
}

Gf4Vector slice(const Gf4Vector& v, std::size_t begin, std::size_t n) {
  return Gf4Vector(std::vector<Gf4>(v.begin() + static_cast<std::ptrdiff_t>(begin),
                                    v.begin() + static_cast<std::ptrdiff_t>(begin + n)));
}

std::optional<json> load_json(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  const auto b = read_file(path);
  try {
    return json::parse(b.begin(), b.end());
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

Profile build_profile(const ExperimentConfig& c, std::vector<std::pair<std::string, double>>* timings) {
  if (auto issues = check_config(c); !issues.empty()) throw ConfigError(issues);
  auto t0 = Clock::now();
  Profile p;
  p.source = profile_source(c);
  p.thresholds = c.effective_thresholds();
  const auto counts = estimate_main_counts(c.puf, p.thresholds, c.trials, c.estimation_cells, c.seed);
  p.main_channel = counts.rates();
  p.input_masses = counts.input_masses();
  p.channel_kind = c.channel;
  const TransitionMatrix w = c.channel == ChannelKind::kAdditive ? additive_noise_channel(p.main_channel, p.input_masses)
                                                                 : p.main_channel;
  if (timings) timings->emplace_back("channel-estimate", seconds_since(t0));
  t0 = Clock::now();
  p.construction = genie_construct(w, c.n, c.genie_frames, c.seed);
  if (timings) timings->emplace_back("genie-construction", seconds_since(t0));
  return p;
}

PufArray make_device(const ExperimentConfig& c, std::uint64_t device_seed) {
  PufArray a;
  a.params = c.puf;
  a.seed = device_seed;
  a.cells = sample_cells(c.puf, c.n * c.blocks, device_seed);
  return a;
}

Gf4Vector extract_responses(std::span<const PufCell> cells, std::uint32_t trials, const QuantizerThresholds& t,
                            std::uint64_t seed, std::uint64_t domain) {
  const auto ones = evaluate_array(cells, trials, seed, domain);
  return quantize_counts(ones, trials, t);
}

EnrollOutcome run_enroll(const ExperimentConfig& c, const Profile& p, std::uint64_t seed) {
  check_profile_matches(p, c);
  const auto part = config_partition(c, p);
  EnrollOutcome out;
  out.device = make_device(c, seed);
  const Gf4Vector q = extract_responses(out.device.cells, c.trials, p.thresholds, seed, stream::kEnrollEval);
  const auto seeds = draw_seeds(c.blocks, c.secret, seed);
  auto e = enroll_blocks(seeds, q, part, p.construction, seed, c.key_bits);
  out.helpers = std::move(e.helpers);
  out.key = std::move(e.key);
  return out;
}

std::optional<EnrolledKey> run_reconstruct(const ExperimentConfig& c, const Profile& p, const PufArray& device,
                                           std::span<const HelperData> helpers, std::uint64_t eval_seed,
                                           bool replay_enrollment) {
  check_profile_matches(p, c);
  if (device.params != c.puf) throw ArtifactError("device was simulated with different model parameters");
  if (device.cells.size() != helpers.size() * c.n) throw ArtifactError("device size does not match helper blocks");
  const Gf4Vector q = replay_enrollment
                          ? extract_responses(device.cells, c.trials, p.thresholds, device.seed, stream::kEnrollEval)
                          : extract_responses(device.cells, c.trials, p.thresholds, eval_seed, stream::kReconstructEval);
  return reconstruct_blocks(helpers, q, p.construction, DecoderConfig{c.list_size, c.llr_clamp}, c.key_bits);
}

std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence) {
  if (n == 0 || k > n) throw std::invalid_argument("clopper_pearson: need 0 <= k <= n, n > 0");
  const double a = 1.0 - confidence;
  const double kd = static_cast<double>(k), nd = static_cast<double>(n);
  const double lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nd - kd + 1.0, a / 2);
  const double hi = k == n ? 1.0 : boost::math::ibeta_inv(kd + 1.0, nd - kd, 1.0 - a / 2);
  return {lo, hi};
}

FerResult run_fer(const ExperimentConfig& c, const Profile& p, const FerOptions& o) {
  check_profile_matches(p, c);
  if (o.frames < 1) throw std::invalid_argument("fer: frames must be >= 1");
  const auto part = config_partition(c, p);
  const std::string chash = to_hex(construction_hash(p.construction));
  const std::string cfg_hash = config_hash(c);

  std::uint64_t done = 0, failures = 0;
  auto state = [&] {
    return json{{"config_sha256", cfg_hash}, {"construction_sha256", chash}, {"seed", o.seed},
                {"zero_noise", o.zero_noise}, {"frames_done", done}, {"failures", failures}};
  };
  if (o.checkpoint) {
    if (auto j = load_json(*o.checkpoint)) {
      if (j->value("config_sha256", "") == cfg_hash && j->value("construction_sha256", "") == chash &&
          j->value("seed", std::uint64_t{0}) == o.seed && j->value("zero_noise", false) == o.zero_noise) {
        done = std::min<std::uint64_t>(j->value("frames_done", std::uint64_t{0}), o.frames);
        failures = j->value("failures", std::uint64_t{0});
        if (o.progress) o.progress("resuming at frame " + std::to_string(done));
      }
    }
  }

  const DecoderConfig dc{c.list_size, c.llr_clamp};
  const std::size_t n = c.n;
  while (done < o.frames) {
    const std::uint64_t len = std::min(o.chunk, o.frames - done);
    const std::uint64_t base = done;
    const std::uint64_t fails = parallel_reduce(
        len, std::uint64_t{0},
        [&](std::uint64_t b, std::uint64_t e, std::uint64_t& acc) {
          SclDecoder dec(n, dc);
          for (std::uint64_t i = b; i < e; ++i) {
            const std::uint64_t fseed = derive_seed(o.seed, stream::kFerFrames, base + i);
            const auto cells = sample_cells(c.puf, n * c.blocks, fseed);
            const Gf4Vector q = extract_responses(cells, c.trials, p.thresholds, fseed, stream::kEnrollEval);
            const Gf4Vector q2 =
                o.zero_noise ? q : extract_responses(cells, c.trials, p.thresholds, fseed, stream::kReconstructEval);
            const auto seeds = draw_seeds(c.blocks, c.secret, fseed);
            const auto en = enroll_blocks(seeds, q, part, p.construction, fseed, c.key_bits);
            bool ok = true;
            for (std::size_t blk = 0; blk < c.blocks && ok; ++blk) {
              const auto s = reconstruct_seed(en.helpers[blk], slice(q2, blk * n, n), p.construction, dec);
              ok = s && *s == seeds[blk].symbols;
            }
            acc += ok ? 0 : 1;
          }
        },
        [](std::uint64_t& out, std::uint64_t v) { out += v; });
    done += len;
    failures += fails;
    if (o.checkpoint) write_text(*o.checkpoint, state().dump(2) + "\n");
    if (o.progress)
      o.progress("frames " + std::to_string(done) + "/" + std::to_string(o.frames) + ", failures " +
                 std::to_string(failures));
  }

  FerResult r;
  r.frames = o.frames;
  r.failures = failures;
  r.rate = static_cast<double>(failures) / static_cast<double>(o.frames);
  std::tie(r.ci_low, r.ci_high) = clopper_pearson(failures, o.frames);
  return r;
}

json fer_report(const ExperimentConfig& c, const Profile& p, const FerOptions& o, const FerResult& r) {
  return {{"kind", "fer"},
          {"config_sha256", config_hash(c)},
          {"construction_sha256", to_hex(construction_hash(p.construction))},
          {"n", c.n},
          {"mask", c.mask},
          {"secret", c.secret},
          {"list_size", c.list_size},
          {"blocks", c.blocks},
          {"seed", o.seed},
          {"zero_noise", o.zero_noise},
          {"frames", r.frames},
          {"failures", r.failures},
          {"rate", r.rate},
          {"ci_low", r.ci_low},
          {"ci_high", r.ci_high},
          {"confidence", 0.95}};
}

WeightHistogram mask_histogram(const CodeConstruction& c, std::size_t mask, unsigned cap,
                               const std::optional<std::filesystem::path>& checkpoint, const ProgressFn& progress) {
  if (mask > c.block_length) throw std::invalid_argument("mask longer than block length");
  const std::span<const std::uint32_t> idx(c.reliability_order.data(), mask);
  const LinearSubcode c2 = subcode_rows(c, idx);
  if (c2.dimension() > cap || c2.dimension() > 31) throw EnumerationCapError(c2.dimension(), cap);
  const std::uint64_t total = std::uint64_t{1} << (2 * c2.dimension());
  const std::uint64_t chunk = std::uint64_t{1} << 28;
  if (!checkpoint && total <= chunk) return weight_histogram(c2, cap);

  const std::string chash = to_hex(construction_hash(c));
  WeightHistogram h(c.block_length);
  std::uint64_t next = 0;
  if (checkpoint) {
    if (auto j = load_json(*checkpoint)) {
      if (j->value("construction_sha256", "") == chash && j->value("mask", std::size_t{0}) == mask &&
          j->contains("counts") && (*j)["counts"].size() == h.counts.size()) {
        next = j->value("next", std::uint64_t{0});
        h.counts = (*j)["counts"].get<std::vector<std::uint64_t>>();
        if (progress) progress("resuming enumeration at " + std::to_string(next));
      }
    }
  }
  const auto rows = pack_row_multiples(c2);
  const auto& kern = simd::kernels();
  while (next < total) {
    const std::uint64_t len = std::min(chunk, total - next);
    const std::uint64_t base = next;
    h += parallel_reduce(
        len, WeightHistogram(c.block_length),
        [&](std::uint64_t b, std::uint64_t e, WeightHistogram& acc) {
          kern.gray_enumerate(rows, base + b, base + e, acc.counts.data());
        },
        [](WeightHistogram& out, const WeightHistogram& part) { out += part; });
    next += len;
    if (checkpoint)
      write_text(*checkpoint, json{{"construction_sha256", chash}, {"mask", mask}, {"next", next}, {"total", total},
                                   {"counts", h.counts}}
                                      .dump() +
                                  "\n");
    if (progress) progress("mask " + std::to_string(mask) + ": " + std::to_string(next) + "/" + std::to_string(total));
  }
  return h;
}

std::vector<LeakageRowResult> run_leakage(const ExperimentConfig& c, const Profile& p, const LeakageOptions& o) {
  check_profile_matches(p, c);
  const std::size_t dim = c.mask + c.secret;
  std::map<std::size_t, WeightHistogram> cache;
  std::vector<LeakageRowResult> out;
  for (const auto& row : c.leakage_rows) {
    LeakageRowResult r;
    r.row = row;
    r.masses = row.distribution();
    r.entropy = response_entropy(r.masses);
    r.mask = row.mask;
    r.secret = dim - row.mask;
    const auto t0 = Clock::now();
    if (!bound_applies(r.masses, 1e-9)) {
      r.status = "not applicable";
      r.note = "bound needs p0 >= 1/4 and p1 = p2 = p3";
    } else if (row.mask > kQuickMaskLimit && !o.long_run) {
      r.status = "skipped";
      r.note = "mask " + std::to_string(row.mask) + " needs --long-run";
    } else {
      try {
        auto it = cache.find(row.mask);
        if (it == cache.end()) {
          std::optional<std::filesystem::path> cp;
          if (o.checkpoint_dir) cp = *o.checkpoint_dir / ("enumeration-mask" + std::to_string(row.mask) + ".json");
          it = cache.emplace(row.mask, mask_histogram(p.construction, row.mask, c.enumeration_cap, cp, o.progress)).first;
        }
        r.bound = leakage_bound(it->second, r.masses[0]);
        r.status = "ok";
        const std::size_t per = key_bits_budget(r.secret, r.bound->bits, 1);
        r.key_bits_per_block = per;
        if (per > 0) r.blocks = (c.key_bits + per - 1) / per;
      } catch (const EnumerationCapError& e) {
        r.status = "skipped";
        r.note = e.what();
      }
    }
    r.seconds = seconds_since(t0);
    out.push_back(std::move(r));
  }
  return out;
}

json leakage_report(const ExperimentConfig& c, const Profile& p, const std::vector<LeakageRowResult>& rows) {
  json jr = json::array();
  auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
  for (const auto& r : rows) {
    jr.push_back({{"p0", r.row.p0},
                  {"masses", r.masses.p},
                  {"entropy", r.entropy},
                  {"mask", r.mask},
                  {"secret", r.secret},
                  {"status", r.status},
                  {"note", r.note},
                  {"bound_bits", r.bound ? json(r.bound->bits) : json(nullptr)},
                  {"raw_bound_bits", r.bound ? json(r.bound->raw_bits) : json(nullptr)},
                  {"key_bits_per_block", opt(r.key_bits_per_block)},
                  {"blocks", opt(r.blocks)}});
  }
  return {{"kind", "leakage"},
          {"config_sha256", config_hash(c)},
          {"construction_sha256", to_hex(construction_hash(p.construction))},
          {"n", c.n},
          {"code_dimension", c.mask + c.secret},
          {"key_bits", c.key_bits},
          {"rows", jr}};
}

std::string format_leakage_table(const json& report) {
  std::ostringstream os;
  os << "code (" << report.at("n").get<std::size_t>() << ", " << report.at("code_dimension").get<std::size_t>()
     << "), " << report.at("key_bits").get<std::size_t>() << "-bit key\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-30s %8s %5s %12s %10s %6s  %s\n", "masses p0/p1/p2/p3", "entropy", "mask",
                "bound(bits)", "bits/block", "blocks", "status");
  os << line;
  for (const auto& r : report.at("rows")) {
    const auto& m = r.at("masses");
    const std::string masses = fixed(m[0], 3) + "/" + fixed(m[1], 3) + "/" + fixed(m[2], 3) + "/" + fixed(m[3], 3);
    const std::string bound = r.at("bound_bits").is_null() ? "-" : fixed(r["bound_bits"], 4);
    const std::string per = r.at("key_bits_per_block").is_null() ? "-" : std::to_string(r["key_bits_per_block"].get<std::size_t>());
    const std::string blocks = r.at("blocks").is_null() ? "-" : std::to_string(r["blocks"].get<std::size_t>());
    std::string status = r.at("status").get<std::string>();
    if (r.contains("note") && !r["note"].get<std::string>().empty()) status += " (" + r["note"].get<std::string>() + ")";
    std::snprintf(line, sizeof line, "%-30s %8s %5zu %12s %10s %6s  %s\n", masses.c_str(),
                  fixed(r.at("entropy"), 4).c_str(), r.at("mask").get<std::size_t>(), bound.c_str(), per.c_str(),
                  blocks.c_str(), status.c_str());
    os << line;
  }
  return os.str();
}

std::string format_fer_summary(const json& r) {
  std::ostringstream os;
  os << "code (" << r.at("n").get<std::size_t>() << ", " << r.at("mask").get<std::size_t>() + r.at("secret").get<std::size_t>()
     << "), L=" << r.at("list_size").get<unsigned>() << ", blocks=" << r.at("blocks").get<std::size_t>()
     << (r.at("zero_noise").get<bool>() ? ", zero noise" : "") << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "failures %llu / %llu frames, rate %.3g, 95%% CI [%.3g, %.3g]\n",
                static_cast<unsigned long long>(r.at("failures").get<std::uint64_t>()),
                static_cast<unsigned long long>(r.at("frames").get<std::uint64_t>()), r.at("rate").get<double>(),
                r.at("ci_low").get<double>(), r.at("ci_high").get<double>());
  os << line;
  return os.str();
}

}  // namespace qpuf
