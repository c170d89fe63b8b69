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

#include "qpuf/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "qpuf/polar.hpp"
#include "qpuf/wiretap_fe.hpp"

namespace qpuf {
namespace {

constexpr const char* kDefaultToml = R"(# qpuf experiment configuration
seed = 1

[puf]
lambda1 = 0.1213
lambda2 = 0.0210
trials = 1000                # evaluations per cell per extraction
estimation_cells = 1000000   # simulated cells for the W_m estimate

[quantizer]
# Either target masses p0..p3 (thresholds follow from the model) or
# explicit thresholds = [a, b, c] on the one-frequency axis.
masses = [0.25, 0.25, 0.25, 0.25]

[code]
n = 256
mask = 0
secret = 64
list_size = 4
llr_clamp = 500.0
channel = "additive"         # "additive" or "main"
genie_frames = 100000
key_bits = 128
blocks = 1

[fer]
frames = 10000

[leakage]
enumeration_cap = 16

[[leakage.rows]]
p0 = 0.25
mask = 0

[[leakage.rows]]
p0 = 0.265
mask = 15

[[leakage.rows]]
p0 = 0.268
mask = 15

[[leakage.rows]]
p0 = 0.271
mask = 15

[[leakage.rows]]
p0 = 0.274
mask = 15

[[leakage.rows]]
p0 = 0.277
mask = 15

[[leakage.rows]]
p0 = 0.28
mask = 15

[[leakage.rows]]
p0 = 0.28
mask = 16

[output]
dir = "qpuf-out"
)";

// Allowed keys per table; anything else is reported.
const std::map<std::string, std::set<std::string>>& schema_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"", {"seed", "puf", "quantizer", "code", "fer", "leakage", "output"}},
      {"puf", {"lambda1", "lambda2", "trials", "estimation_cells"}},
      {"quantizer", {"masses", "thresholds"}},
      {"code", {"n", "mask", "secret", "list_size", "llr_clamp", "channel", "genie_frames", "key_bits", "blocks"}},
      {"fer", {"frames"}},
      {"leakage", {"enumeration_cap", "rows"}},
      {"leakage.rows", {"p0", "mask", "masses"}},
      {"output", {"dir"}},
  };
  return k;
}

class TomlReader {
 public:
  explicit TomlReader(std::vector<std::string>& issues) : issues_(issues) {}

  void check_keys(const toml::table& t, const std::string& schema, const std::string& where) {
    const auto& allowed = schema_keys().at(schema);
    for (const auto& [key, node] : t) {
      const std::string k(key.str());
      if (!allowed.count(k)) issues_.push_back(join(where, k) + ": unknown key");
    }
  }

  const toml::table* table(const toml::table& t, const std::string& key, const std::string& where) {
    const toml::node* n = t.get(key);
    if (!n) return nullptr;
    if (!n->is_table()) {
      issues_.push_back(join(where, key) + ": expected a table");
      return nullptr;
    }
    return n->as_table();
  }

  template <class T>
  void integer(const toml::table& t, const std::string& key, const std::string& where, T& out, std::int64_t lo,
               std::int64_t hi) {
    const toml::node* n = t.get(key);
    if (!n) return;
    if (!n->is_integer()) {
      issues_.push_back(join(where, key) + ": expected an integer");
      return;
    }
    const auto v = n->as_integer()->get();
    if (v < lo || v > hi) {
      issues_.push_back(join(where, key) + ": " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
      return;
    }
    out = static_cast<T>(v);
  }

  void u64(const toml::table& t, const std::string& key, const std::string& where, std::uint64_t& out) {
    const toml::node* n = t.get(key);
    if (!n) return;
    if (!n->is_integer() || n->as_integer()->get() < 0) {
      issues_.push_back(join(where, key) + ": expected a nonnegative integer");
      return;
    }
    out = static_cast<std::uint64_t>(n->as_integer()->get());
  }

  void number(const toml::table& t, const std::string& key, const std::string& where, double& out) {
    const toml::node* n = t.get(key);
    if (!n) return;
    if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) {
      out = *v;
      return;
    }
    issues_.push_back(join(where, key) + ": expected a number");
  }

  std::optional<std::vector<double>> numbers(const toml::table& t, const std::string& key, const std::string& where,
                                             std::size_t count) {
    const toml::node* n = t.get(key);
    if (!n) return std::nullopt;
    const toml::array* a = n->as_array();
    std::vector<double> out;
    if (a && a->size() == count) {
      for (const auto& e : *a) {
        auto v = e.value<double>();
        if (!v || !(e.is_floating_point() || e.is_integer())) break;
        out.push_back(*v);
      }
    }
    if (out.size() != count) {
      issues_.push_back(join(where, key) + ": expected an array of " + std::to_string(count) + " numbers");
      return std::nullopt;
    }
    return out;
  }

  void string(const toml::table& t, const std::string& key, const std::string& where, std::string& out) {
    const toml::node* n = t.get(key);
    if (!n) return;
    if (!n->is_string()) {
      issues_.push_back(join(where, key) + ": expected a string");
      return;
    }
    out = n->as_string()->get();
  }

 private:
  static std::string join(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
  }
  std::vector<std::string>& issues_;
};

ResponseDistribution to_masses(const std::vector<double>& v) {
  ResponseDistribution d;
  for (std::size_t i = 0; i < 4; ++i) d.p[i] = v[i];
  return d;
}

}  // namespace

const char* channel_kind_name(ChannelKind k) { return k == ChannelKind::kAdditive ? "additive" : "main"; }

ResponseDistribution LeakageRow::distribution() const {
  return masses ? *masses : ResponseDistribution::symmetric(p0);
}

std::vector<LeakageRow> ExperimentConfig::default_leakage_rows() {
  std::vector<LeakageRow> rows{{0.25, std::nullopt, 0}};
  for (double p0 : {0.265, 0.268, 0.271, 0.274, 0.277, 0.28}) rows.push_back({p0, std::nullopt, 15});
  rows.push_back({0.28, std::nullopt, 16});
  return rows;
}

QuantizerThresholds ExperimentConfig::effective_thresholds() const {
  if (thresholds) return *thresholds;
  return thresholds_for_masses(puf, target_masses);
}

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error([&] {
        std::string s = "invalid configuration:";
        for (const auto& i : issues) s += "\n  " + i;
        return s;
      }()),
      issues_(std::move(issues)) {}

std::vector<std::string> check_config(const ExperimentConfig& c) {
  std::vector<std::string> issues;
  auto guard = [&](const std::string& where, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      issues.push_back(where + ": " + e.what());
    }
  };
  guard("puf", [&] { c.puf.validate(); });
  if (c.trials < 1) issues.push_back("puf.trials: must be >= 1");
  if (c.estimation_cells < 1000) issues.push_back("puf.estimation_cells: must be >= 1000");
  if (c.thresholds) guard("quantizer.thresholds", [&] { c.thresholds->validate(); });
  else guard("quantizer.masses", [&] { c.target_masses.validate(1e-9); });
  if (c.n < 4 || !is_power_of_four(c.n) || c.n > 65536) issues.push_back("code.n: must be 4^k with 1 <= k <= 8");
  if (c.mask + c.secret > c.n) issues.push_back("code: mask + secret exceeds n");
  if (c.secret < 1) issues.push_back("code.secret: must be >= 1");
  if (c.list_size < 1 || c.list_size > 256) issues.push_back("code.list_size: must be in [1, 256]");
  if (!(c.llr_clamp > 0.0)) issues.push_back("code.llr_clamp: must be positive");
  if (c.genie_frames < 1000) issues.push_back("code.genie_frames: must be >= 1000");
  if (c.key_bits == 0 || c.key_bits % 8 != 0 || c.key_bits > 256)
    issues.push_back("code.key_bits: must be a positive multiple of 8 up to 256");
  if (c.blocks < 1) issues.push_back("code.blocks: must be >= 1");
  if (c.fer_frames < 1) issues.push_back("fer.frames: must be >= 1");
  if (c.enumeration_cap < 1 || c.enumeration_cap > 31) issues.push_back("leakage.enumeration_cap: must be in [1, 31]");
  for (std::size_t i = 0; i < c.leakage_rows.size(); ++i) {
    const auto& r = c.leakage_rows[i];
    const std::string where = "leakage.rows[" + std::to_string(i) + "]";
    if (!(r.p0 > 0.0 && r.p0 <= 1.0)) issues.push_back(where + ".p0: must be in (0, 1]");
    if (r.mask > c.mask + c.secret) issues.push_back(where + ".mask: exceeds code dimension mask + secret");
    if (r.masses) guard(where + ".masses", [&] { r.masses->validate(1e-9); });
  }
  if (c.output_dir.empty()) issues.push_back("output.dir: must not be empty");
  return issues;
}

ExperimentConfig parse_config(std::string_view toml_text, std::string_view source_name) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source_name);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError({os.str()});
  }
  std::vector<std::string> issues;
  TomlReader rd(issues);
  ExperimentConfig c;
  rd.check_keys(root, "", "");
  if (!root.contains("seed")) issues.push_back("seed: required (runs must be reproducible)");
  rd.u64(root, "seed", "", c.seed);

  if (const auto* t = rd.table(root, "puf", "")) {
    rd.check_keys(*t, "puf", "puf");
    rd.number(*t, "lambda1", "puf", c.puf.lambda1);
    rd.number(*t, "lambda2", "puf", c.puf.lambda2);
    rd.integer(*t, "trials", "puf", c.trials, 1, 1 << 30);
    rd.u64(*t, "estimation_cells", "puf", c.estimation_cells);
  }
  if (const auto* t = rd.table(root, "quantizer", "")) {
    rd.check_keys(*t, "quantizer", "quantizer");
    if (t->contains("masses") && t->contains("thresholds"))
      issues.push_back("quantizer: give either masses or thresholds, not both");
    if (auto m = rd.numbers(*t, "masses", "quantizer", 4)) c.target_masses = to_masses(*m);
    if (auto th = rd.numbers(*t, "thresholds", "quantizer", 3)) c.thresholds = QuantizerThresholds{(*th)[0], (*th)[1], (*th)[2]};
  }
  if (const auto* t = rd.table(root, "code", "")) {
    rd.check_keys(*t, "code", "code");
    rd.integer(*t, "n", "code", c.n, 1, 1 << 20);
    rd.integer(*t, "mask", "code", c.mask, 0, 1 << 20);
    rd.integer(*t, "secret", "code", c.secret, 0, 1 << 20);
    rd.integer(*t, "list_size", "code", c.list_size, 1, 256);
    rd.number(*t, "llr_clamp", "code", c.llr_clamp);
    std::string ch = channel_kind_name(c.channel);
    rd.string(*t, "channel", "code", ch);
    if (ch == "additive") c.channel = ChannelKind::kAdditive;
    else if (ch == "main") c.channel = ChannelKind::kMain;
    else issues.push_back("code.channel: expected \"additive\" or \"main\"");
    rd.u64(*t, "genie_frames", "code", c.genie_frames);
    rd.integer(*t, "key_bits", "code", c.key_bits, 0, 256);
    rd.integer(*t, "blocks", "code", c.blocks, 1, 1024);
  }
  if (const auto* t = rd.table(root, "fer", "")) {
    rd.check_keys(*t, "fer", "fer");
    rd.u64(*t, "frames", "fer", c.fer_frames);
  }
  c.leakage_rows = ExperimentConfig::default_leakage_rows();
  if (const auto* t = rd.table(root, "leakage", "")) {
    rd.check_keys(*t, "leakage", "leakage");
    rd.integer(*t, "enumeration_cap", "leakage", c.enumeration_cap, 1, 31);
    if (const toml::node* rows = t->get("rows")) {
      const toml::array* a = rows->as_array();
      if (!a || !a->is_array_of_tables()) {
        issues.push_back("leakage.rows: expected an array of tables");
      } else {
        c.leakage_rows.clear();
        for (std::size_t i = 0; i < a->size(); ++i) {
          const auto& rt = *(*a)[i].as_table();
          const std::string where = "leakage.rows[" + std::to_string(i) + "]";
          rd.check_keys(rt, "leakage.rows", where);
          LeakageRow r;
          if (!rt.contains("p0") && !rt.contains("masses")) issues.push_back(where + ": needs p0 or masses");
          rd.number(rt, "p0", where, r.p0);
          rd.integer(rt, "mask", where, r.mask, 0, 1 << 20);
          if (auto m = rd.numbers(rt, "masses", where, 4)) {
            r.masses = to_masses(*m);
            if (!rt.contains("p0")) r.p0 = (*m)[0];
            else if (std::abs(r.p0 - (*m)[0]) > 1e-12) issues.push_back(where + ": p0 disagrees with masses[0]");
          }
          c.leakage_rows.push_back(r);
        }
      }
    }
  }
  if (const auto* t = rd.table(root, "output", "")) {
    rd.check_keys(*t, "output", "output");
    std::string dir = c.output_dir.string();
    rd.string(*t, "dir", "output", dir);
    c.output_dir = dir;
  }
  if (issues.empty()) {
    auto more = check_config(c);
    issues.insert(issues.end(), more.begin(), more.end());
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read " + path.string()});
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentConfig c = parse_config(ss.str(), path.string());
  if (c.output_dir.is_relative()) c.output_dir = path.parent_path() / c.output_dir;
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  using nlohmann::json;
  json j;
  j["seed"] = c.seed;
  j["puf"] = {{"lambda1", c.puf.lambda1}, {"lambda2", c.puf.lambda2}, {"trials", c.trials},
              {"estimation_cells", c.estimation_cells}};
  if (c.thresholds) j["quantizer"] = {{"thresholds", {c.thresholds->a, c.thresholds->b, c.thresholds->c}}};
  else j["quantizer"] = {{"masses", c.target_masses.p}};
  j["code"] = {{"n", c.n}, {"mask", c.mask}, {"secret", c.secret}, {"list_size", c.list_size},
               {"llr_clamp", c.llr_clamp}, {"channel", channel_kind_name(c.channel)},
               {"genie_frames", c.genie_frames}, {"key_bits", c.key_bits}, {"blocks", c.blocks}};
  j["fer"] = {{"frames", c.fer_frames}};
  json rows = json::array();
  for (const auto& r : c.leakage_rows) {
    json row = {{"p0", r.p0}, {"mask", r.mask}};
    if (r.masses) row["masses"] = r.masses->p;
    rows.push_back(row);
  }
  j["leakage"] = {{"enumeration_cap", c.enumeration_cap}, {"rows", rows}};
  j["output"] = {{"dir", c.output_dir.generic_string()}};
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  nlohmann::json j = config_to_json(c);
  j.erase("output");  // where results go does not change them
  const std::string s = j.dump();
  const auto d = sha256({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  return to_hex(d);
}

std::string default_config_toml() { return kDefaultToml; }

}  // namespace qpuf
