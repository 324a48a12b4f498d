// Copyright 2026 The OAC Privacy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oac_privacy/run_config.h"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "absl/strings/str_format.h"

namespace oac_privacy {
namespace {

using Json = nlohmann::json;

// Reads typed fields from one JSON object and remembers which keys were
// consumed so that leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const Json& object, std::string path)
      : object_(object), path_(std::move(path)) {}

  bool Has(const std::string& key) const { return object_.contains(key); }

  void Real(const std::string& key, double& out, bool required = true) {
    const Json* v = Find(key, required);
    if (v == nullptr) return;
    if (!v->is_number()) return Fail(key, "must be a number");
    out = v->get<double>();
  }

  void Int(const std::string& key, int& out, bool required = true) {
    const Json* v = Find(key, required);
    if (v == nullptr) return;
    if (!v->is_number_integer()) return Fail(key, "must be an integer");
    const auto value = v->get<int64_t>();
    if (value < std::numeric_limits<int>::min() ||
        value > std::numeric_limits<int>::max()) {
      return Fail(key, "is out of range");
    }
    out = static_cast<int>(value);
  }

  void Seed(const std::string& key, uint64_t& out) {
    const Json* v = Find(key, true);
    if (v == nullptr) return;
    if (!v->is_number_unsigned()) {
      return Fail(key, "must be a non-negative integer");
    }
    out = v->get<uint64_t>();
  }

  void String(const std::string& key, std::string& out,
              bool required = true) {
    const Json* v = Find(key, required);
    if (v == nullptr) return;
    if (!v->is_string()) return Fail(key, "must be a string");
    out = v->get<std::string>();
  }

  void Fail(const std::string& key, const std::string& what) {
    if (status_.ok()) {
      status_ = absl::InvalidArgumentError(
          absl::StrFormat("config key %s.%s %s", path_, key, what));
    }
  }

  // Reports the first error, or any key that was never read.
  absl::Status Finish() {
    if (!status_.ok()) return status_;
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (!seen_.contains(it.key())) {
        return absl::InvalidArgumentError(
            absl::StrFormat("unknown config key %s.%s", path_, it.key()));
      }
    }
    return absl::OkStatus();
  }

 private:
  const Json* Find(const std::string& key, bool required) {
    seen_.insert(key);
    auto it = object_.find(key);
    if (it == object_.end()) {
      if (required) Fail(key, "is required");
      return nullptr;
    }
    return &*it;
  }

  const Json& object_;
  std::string path_;
  std::set<std::string> seen_;
  absl::Status status_;
};

absl::Status RequireObject(const Json& value, const char* name) {
  if (!value.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("config block %s must be an object", name));
  }
  return absl::OkStatus();
}

absl::StatusOr<AccountantConfig> ParseAccountant(const Json& block) {
  if (absl::Status s = RequireObject(block, "accountant"); !s.ok()) return s;
  AccountantConfig config;
  ObjectReader r(block, "accountant");
  r.Real("sampling_rate", config.sampling_rate, /*required=*/false);
  r.Real("noise_multiplier", config.noise_multiplier);
  r.Real("delta", config.delta);
  r.Int("alpha_min", config.alpha_min, /*required=*/false);
  r.Int("alpha_max", config.alpha_max, /*required=*/false);
  r.Int("t_max", config.t_max);
  r.Real("act_slack_fraction", config.act_slack_fraction, /*required=*/false);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  if (absl::Status s = ValidateAccountantConfig(config); !s.ok()) return s;
  return config;
}

absl::StatusOr<SystemConfig> ParseSystem(const Json& block) {
  if (absl::Status s = RequireObject(block, "system"); !s.ok()) return s;
  SystemConfig config;
  ObjectReader r(block, "system");
  r.Int("n_devices", config.n_devices);
  r.Real("participation_prob", config.participation_prob);
  r.Real("batch_prob", config.batch_prob);
  r.Real("clip_norm", config.clip_norm);
  r.Real("device_noise_std", config.device_noise_std);
  r.Real("channel_noise_var", config.channel_noise_var);
  r.Real("learning_rate", config.learning_rate);
  r.Int("rounds", config.rounds);
  r.Real("csi_factor", config.csi_factor);
  r.Seed("seed", config.seed);
  std::string gain_model = "constant";
  r.String("gain_model", gain_model, /*required=*/false);
  if (gain_model == "constant") {
    config.gain_model = ChannelGainModel::kConstant;
  } else if (gain_model == "lognormal") {
    config.gain_model = ChannelGainModel::kLogNormal;
  } else {
    r.Fail("gain_model", "must be \"constant\" or \"lognormal\"");
  }
  r.Real("gain_log_std", config.gain_log_std, /*required=*/false);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  if (absl::Status s = ValidateSystemConfig(config); !s.ok()) return s;
  return config;
}

absl::StatusOr<LinearRegressionTask> ParseTask(const Json& block) {
  if (absl::Status s = RequireObject(block, "task"); !s.ok()) return s;
  LinearRegressionTask task;
  ObjectReader r(block, "task");
  std::string kind;
  r.String("kind", kind);
  if (r.Has("kind") && kind != "linear_regression") {
    r.Fail("kind", "must be \"linear_regression\"");
  }
  r.Int("dimension", task.dimension);
  r.Int("samples_per_device", task.samples_per_device);
  r.Real("feature_std", task.feature_std, /*required=*/false);
  r.Real("label_noise_std", task.label_noise_std, /*required=*/false);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  if (absl::Status s = ValidateLinearRegressionTask(task); !s.ok()) return s;
  return task;
}

absl::StatusOr<AccountingOptions> ParseAccounting(const Json& block) {
  if (absl::Status s = RequireObject(block, "accounting"); !s.ok()) return s;
  AccountingOptions options;
  ObjectReader r(block, "accounting");
  std::string mode;
  r.String("mode", mode);
  if (mode == "nominal") {
    options.mode = AccountingMode::kNominal;
    r.Real("noise_multiplier", options.noise_multiplier);
  } else if (mode == "realized") {
    options.mode = AccountingMode::kRealized;
  } else if (r.Has("mode")) {
    r.Fail("mode", "must be \"nominal\" or \"realized\"");
  }
  r.Real("delta", options.delta);
  r.Int("alpha_min", options.alpha_min, /*required=*/false);
  r.Int("alpha_max", options.alpha_max, /*required=*/false);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  if (absl::Status s = ValidateAccountingOptions(options); !s.ok()) return s;
  return options;
}

}  // namespace

absl::StatusOr<RunConfigFile> ParseRunConfig(std::string_view text) {
  Json root = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    return absl::InvalidArgumentError("config is not valid JSON");
  }
  if (absl::Status s = RequireObject(root, "root"); !s.ok()) return s;

  RunConfigFile config;
  static const std::set<std::string> kBlocks = {
      "schema_version", "accountant", "system",     "task",
      "accounting",     "output_path"};
  for (auto it = root.begin(); it != root.end(); ++it) {
    if (!kBlocks.contains(it.key())) {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown config key %s", it.key()));
    }
  }
  auto version = root.find("schema_version");
  if (version == root.end()) {
    return absl::InvalidArgumentError("config key schema_version is required");
  }
  if (!version->is_number_integer() ||
      version->get<int64_t>() != kSchemaVersion) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "unsupported schema_version %s; expected %d", version->dump(),
        kSchemaVersion));
  }

  if (auto it = root.find("accountant"); it != root.end()) {
    absl::StatusOr<AccountantConfig> block = ParseAccountant(*it);
    if (!block.ok()) return block.status();
    config.accountant = *block;
  }
  if (auto it = root.find("system"); it != root.end()) {
    absl::StatusOr<SystemConfig> block = ParseSystem(*it);
    if (!block.ok()) return block.status();
    config.system = *block;
  }
  if (auto it = root.find("task"); it != root.end()) {
    absl::StatusOr<LinearRegressionTask> block = ParseTask(*it);
    if (!block.ok()) return block.status();
    config.task = *block;
  }
  if (auto it = root.find("accounting"); it != root.end()) {
    absl::StatusOr<AccountingOptions> block = ParseAccounting(*it);
    if (!block.ok()) return block.status();
    config.accounting = *block;
  }
  if (auto it = root.find("output_path"); it != root.end()) {
    if (!it->is_string()) {
      return absl::InvalidArgumentError("config key output_path must be a string");
    }
    config.output_path = it->get<std::string>();
  }
  return config;
}

absl::StatusOr<RunConfigFile> LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot read config file %s", path));
  }
  std::ostringstream text;
  text << in.rdbuf();
  return ParseRunConfig(text.str());
}

nlohmann::ordered_json AccountantConfigToJson(const AccountantConfig& c) {
  nlohmann::ordered_json j;
  j["sampling_rate"] = c.sampling_rate;
  j["noise_multiplier"] = c.noise_multiplier;
  j["delta"] = c.delta;
  j["alpha_min"] = c.alpha_min;
  j["alpha_max"] = c.alpha_max;
  j["t_max"] = c.t_max;
  j["act_slack_fraction"] = c.act_slack_fraction;
  return j;
}

nlohmann::ordered_json RunConfigToJson(const RunConfigFile& config) {
  nlohmann::ordered_json j;
  j["schema_version"] = config.schema_version;
  if (config.accountant) {
    j["accountant"] = AccountantConfigToJson(*config.accountant);
  }
  if (config.system) {
    const SystemConfig& s = *config.system;
    nlohmann::ordered_json b;
    b["n_devices"] = s.n_devices;
    b["participation_prob"] = s.participation_prob;
    b["batch_prob"] = s.batch_prob;
    b["clip_norm"] = s.clip_norm;
    b["device_noise_std"] = s.device_noise_std;
    b["channel_noise_var"] = s.channel_noise_var;
    b["learning_rate"] = s.learning_rate;
    b["rounds"] = s.rounds;
    b["csi_factor"] = s.csi_factor;
    b["seed"] = s.seed;
    b["gain_model"] =
        s.gain_model == ChannelGainModel::kConstant ? "constant" : "lognormal";
    b["gain_log_std"] = s.gain_log_std;
    j["system"] = std::move(b);
  }
  if (config.task) {
    const LinearRegressionTask& t = *config.task;
    nlohmann::ordered_json b;
    b["kind"] = "linear_regression";
    b["dimension"] = t.dimension;
    b["samples_per_device"] = t.samples_per_device;
    b["feature_std"] = t.feature_std;
    b["label_noise_std"] = t.label_noise_std;
    j["task"] = std::move(b);
  }
  if (config.accounting) {
    const AccountingOptions& a = *config.accounting;
    nlohmann::ordered_json b;
    b["mode"] = std::string(AccountingModeName(a.mode));
    if (a.mode == AccountingMode::kNominal) {
      b["noise_multiplier"] = a.noise_multiplier;
    }
    b["delta"] = a.delta;
    b["alpha_min"] = a.alpha_min;
    b["alpha_max"] = a.alpha_max;
    j["accounting"] = std::move(b);
  }
  if (config.output_path) j["output_path"] = *config.output_path;
  return j;
}

}  // namespace oac_privacy
