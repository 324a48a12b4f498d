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

#include "oac_privacy/accountant.h"

#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_format.h"

namespace oac_privacy {

absl::Status ValidateAccountantConfig(const AccountantConfig& config) {
  if (absl::Status s = ValidateSampledGmSpec(
          {config.sampling_rate, config.noise_multiplier});
      !s.ok()) {
    return s;
  }
  if (!(config.delta > 0 && config.delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", config.delta));
  }
  if (config.alpha_min < 2 || config.alpha_max < config.alpha_min) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid order grid [%d, %d]; need 2 <= min <= max", config.alpha_min,
        config.alpha_max));
  }
  if (config.t_max < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("t_max must be >= 1, got %d", config.t_max));
  }
  if (!(config.act_slack_fraction > 0 && config.act_slack_fraction < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("act_slack_fraction must lie in (0, 1), got %g",
                        config.act_slack_fraction));
  }
  return absl::OkStatus();
}

std::string_view AccountingMethodName(AccountingMethod method) {
  switch (method) {
    case AccountingMethod::kRdp:
      return "rdp";
    case AccountingMethod::kAdvancedComposition:
      return "act";
  }
  return "unknown";
}

absl::StatusOr<RdpCurve> PerStepCurve(const SampledGmSpec& spec,
                                      int alpha_min, int alpha_max) {
  if (alpha_min < 2 || alpha_max < alpha_min) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid order grid [%d, %d]; need 2 <= min <= max", alpha_min,
        alpha_max));
  }
  std::vector<RdpPoint> points;
  points.reserve(alpha_max - alpha_min + 1);
  for (int alpha = alpha_min; alpha <= alpha_max; ++alpha) {
    absl::StatusOr<double> eps = SampledGaussianRdp(spec, alpha);
    if (!eps.ok()) return eps.status();
    points.push_back({static_cast<double>(alpha), *eps});
  }
  return RdpCurve::Create(std::move(points));
}

absl::StatusOr<ConvertedEpsilon> EpsilonAt(const RdpCurve& curve, int t,
                                           double delta) {
  if (t < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("t must be >= 0, got %d", t));
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  const double log_inv_delta = std::log(1 / delta);
  ConvertedEpsilon best{std::numeric_limits<double>::infinity(), 0};
  for (const RdpPoint& p : curve.points()) {
    const double eps = t * p.epsilon + log_inv_delta / (p.alpha - 1);
    if (eps < best.epsilon) {
      best = {eps, static_cast<int>(p.alpha)};
    }
  }
  return best;
}

absl::StatusOr<ConvertedEpsilon> BestConversion(const RdpCurve& composed,
                                                double delta) {
  return EpsilonAt(composed, 1, delta);
}

absl::StatusOr<PrivacyCurve> Sweep(const AccountantConfig& config) {
  if (absl::Status s = ValidateAccountantConfig(config); !s.ok()) return s;
  absl::StatusOr<RdpCurve> per_step =
      PerStepCurve({config.sampling_rate, config.noise_multiplier},
                   config.alpha_min, config.alpha_max);
  if (!per_step.ok()) return per_step.status();

  PrivacyCurve curve{AccountingMethod::kRdp, config, {}};
  curve.rows.reserve(config.t_max);
  for (int t = 1; t <= config.t_max; ++t) {
    absl::StatusOr<ConvertedEpsilon> converted =
        EpsilonAt(*per_step, t, config.delta);
    if (!converted.ok()) return converted.status();
    curve.rows.push_back(
        {t, converted->epsilon, converted->alpha_star, config.delta});
  }
  return curve;
}

absl::StatusOr<PrivacyCurve> AdvancedCompositionSweep(
    const AccountantConfig& config) {
  if (absl::Status s = ValidateAccountantConfig(config); !s.ok()) return s;
  if (config.sampling_rate != 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "advanced composition is only defined here for sampling rate 1, "
        "got %g",
        config.sampling_rate));
  }
  const GaussianMechanismSpec gm{1.0, config.noise_multiplier};
  const double delta_slack = config.delta * config.act_slack_fraction;
  const double delta_steps = config.delta - delta_slack;

  PrivacyCurve curve{AccountingMethod::kAdvancedComposition, config, {}};
  curve.rows.reserve(config.t_max);
  for (int t = 1; t <= config.t_max; ++t) {
    const double delta_step = delta_steps / t;
    absl::StatusOr<double> eps_step = GaussianDpEpsilon(gm, delta_step);
    if (!eps_step.ok()) return eps_step.status();
    absl::StatusOr<DpBudget> composed =
        AdvancedComposition(*eps_step, delta_step, t, delta_slack);
    if (!composed.ok()) return composed.status();
    // composed->delta equals config.delta up to rounding.
    curve.rows.push_back({t, composed->epsilon, 0, config.delta});
  }
  return curve;
}

}  // namespace oac_privacy
