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

// Multi-round privacy accounting for the subsampled Gaussian mechanism.
//
// The per-round RDP curve is evaluated once on an integer order grid,
// composed over t rounds by scaling, and converted to (epsilon, delta) at
// the order that minimizes the converted epsilon.

#ifndef OAC_PRIVACY_ACCOUNTANT_H_
#define OAC_PRIVACY_ACCOUNTANT_H_

#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "oac_privacy/privacy_core.h"
#include "oac_privacy/subsampled_gaussian.h"

namespace oac_privacy {

inline constexpr int kDefaultAlphaMin = 2;
inline constexpr int kDefaultAlphaMax = 64;
inline constexpr int kDefaultHorizon = 1000;

// Sampling rates rendered by a default sweep.
inline constexpr double kDefaultSweepRates[] = {1.0, 0.5, 0.1, 0.05, 0.01};

struct AccountantConfig {
  double sampling_rate = 1;
  double noise_multiplier = 1;
  double delta = 1e-5;
  int alpha_min = kDefaultAlphaMin;
  int alpha_max = kDefaultAlphaMax;
  int t_max = kDefaultHorizon;
  // Advanced composition only: fraction of delta spent as composition slack.
  // The remainder is divided evenly among the t composed steps.
  double act_slack_fraction = 0.5;
};

absl::Status ValidateAccountantConfig(const AccountantConfig& config);

enum class AccountingMethod { kRdp, kAdvancedComposition };

std::string_view AccountingMethodName(AccountingMethod method);

struct ConvertedEpsilon {
  double epsilon = 0;
  int alpha_star = 0;

  friend bool operator==(const ConvertedEpsilon&,
                         const ConvertedEpsilon&) = default;
};

struct PrivacyRow {
  int t = 0;
  double epsilon = 0;
  // Optimal Renyi order; 0 for advanced composition rows.
  int alpha_star = 0;
  double delta = 0;

  friend bool operator==(const PrivacyRow&, const PrivacyRow&) = default;
};

struct PrivacyCurve {
  AccountingMethod method = AccountingMethod::kRdp;
  AccountantConfig config;
  std::vector<PrivacyRow> rows;  // t = 1..t_max
};

absl::StatusOr<RdpCurve> PerStepCurve(const SampledGmSpec& spec,
                                      int alpha_min, int alpha_max);

// min over the grid of t * eps(alpha) + ln(1/delta) / (alpha - 1). Ties go
// to the smallest alpha.
absl::StatusOr<ConvertedEpsilon> EpsilonAt(const RdpCurve& curve, int t,
                                           double delta);

// Same conversion applied to an already composed curve.
absl::StatusOr<ConvertedEpsilon> BestConversion(const RdpCurve& composed,
                                                double delta);

absl::StatusOr<PrivacyCurve> Sweep(const AccountantConfig& config);

// Advanced composition of the unsampled Gaussian mechanism with sensitivity
// 1 and noise std equal to the noise multiplier. Requires sampling_rate 1.
absl::StatusOr<PrivacyCurve> AdvancedCompositionSweep(
    const AccountantConfig& config);

}  // namespace oac_privacy

#endif  // OAC_PRIVACY_ACCOUNTANT_H_
