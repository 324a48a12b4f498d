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

// Run configuration documents.
//
// A config is a JSON object with a mandatory "schema_version" (currently 1)
// and any of the blocks "accountant", "system", "task" and "accounting",
// plus an optional "output_path". Unknown keys at any level are rejected,
// as are missing required keys and out-of-range values; all checks happen
// before any computation.

#ifndef OAC_PRIVACY_RUN_CONFIG_H_
#define OAC_PRIVACY_RUN_CONFIG_H_

#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "oac_privacy/accountant.h"
#include "oac_privacy/simulator.h"

namespace oac_privacy {

inline constexpr int kSchemaVersion = 1;

struct RunConfigFile {
  int schema_version = kSchemaVersion;
  std::optional<AccountantConfig> accountant;
  std::optional<SystemConfig> system;
  std::optional<LinearRegressionTask> task;
  std::optional<AccountingOptions> accounting;
  std::optional<std::string> output_path;
};

absl::StatusOr<RunConfigFile> ParseRunConfig(std::string_view text);
absl::StatusOr<RunConfigFile> LoadRunConfig(const std::string& path);

// Fully resolved form, defaults filled in. Parsing the dump yields the same
// config.
nlohmann::ordered_json RunConfigToJson(const RunConfigFile& config);

nlohmann::ordered_json AccountantConfigToJson(const AccountantConfig& config);

}  // namespace oac_privacy

#endif  // OAC_PRIVACY_RUN_CONFIG_H_
