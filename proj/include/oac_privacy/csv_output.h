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

// CSV emission for sweeps and simulation trajectories. Floating-point
// values are written with 17 significant digits so they parse back to the
// same double.

#ifndef OAC_PRIVACY_CSV_OUTPUT_H_
#define OAC_PRIVACY_CSV_OUTPUT_H_

#include <cstdint>
#include <span>
#include <string>

#include "absl/status/status.h"
#include "oac_privacy/accountant.h"
#include "oac_privacy/simulator.h"

namespace oac_privacy {

inline constexpr char kSweepCsvHeader[] =
    "sampling_rate,t,alpha_star,epsilon,delta,noise_multiplier,method";
inline constexpr char kTrajectoryCsvHeader[] =
    "round,loss,epsilon,delta,a_t,b_t,seed";

std::string FormatDouble(double value);

// Rows ordered by (sampling_rate, method, t).
std::string SweepCsv(std::span<const PrivacyCurve> curves);

std::string TrajectoryCsv(const Trajectory& trajectory, uint64_t seed);

// Writes through a temporary sibling file and renames it into place; nothing
// is left at `path` on failure.
absl::Status WriteFileAtomically(const std::string& path,
                                 const std::string& contents);

}  // namespace oac_privacy

#endif  // OAC_PRIVACY_CSV_OUTPUT_H_
