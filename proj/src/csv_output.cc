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

#include "oac_privacy/csv_output.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <tuple>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace oac_privacy {

std::string FormatDouble(double value) {
  return absl::StrFormat("%.17g", value);
}

std::string SweepCsv(std::span<const PrivacyCurve> curves) {
  std::vector<const PrivacyCurve*> ordered;
  ordered.reserve(curves.size());
  for (const PrivacyCurve& c : curves) ordered.push_back(&c);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const PrivacyCurve* l, const PrivacyCurve* r) {
                     return std::make_tuple(l->config.sampling_rate,
                                            AccountingMethodName(l->method)) <
                            std::make_tuple(r->config.sampling_rate,
                                            AccountingMethodName(r->method));
                   });

  std::string out = absl::StrCat(kSweepCsvHeader, "\n");
  for (const PrivacyCurve* curve : ordered) {
    const std::string rate = FormatDouble(curve->config.sampling_rate);
    const std::string noise = FormatDouble(curve->config.noise_multiplier);
    const std::string method(AccountingMethodName(curve->method));
    for (const PrivacyRow& row : curve->rows) {
      absl::StrAppend(&out, rate, ",", row.t, ",", row.alpha_star, ",",
                      FormatDouble(row.epsilon), ",", FormatDouble(row.delta),
                      ",", noise, ",", method, "\n");
    }
  }
  return out;
}

std::string TrajectoryCsv(const Trajectory& trajectory, uint64_t seed) {
  std::string out = absl::StrCat(kTrajectoryCsvHeader, "\n");
  for (const TrajectoryRow& row : trajectory.rows) {
    absl::StrAppend(&out, row.round, ",", FormatDouble(row.loss), ",",
                    FormatDouble(row.budget.epsilon), ",",
                    FormatDouble(row.budget.delta), ",", row.a, ",", row.b,
                    ",", seed, "\n");
  }
  return out;
}

absl::Status WriteFileAtomically(const std::string& path,
                                 const std::string& contents) {
  const std::string tmp = path + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) out.write(contents.data(), contents.size());
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      return absl::InternalError(absl::StrFormat("cannot write %s", path));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return absl::InternalError(
        absl::StrFormat("cannot move output into place at %s", path));
  }
  return absl::OkStatus();
}

}  // namespace oac_privacy
