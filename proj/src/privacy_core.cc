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

#include "oac_privacy/privacy_core.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"

namespace oac_privacy {
namespace {

absl::Status CheckOpenUnitDelta(double delta) {
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  return absl::OkStatus();
}

absl::Status CheckAlpha(double alpha) {
  if (!(alpha > 1) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Renyi order alpha must be finite and > 1, got %g",
                        alpha));
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateDpBudget(const DpBudget& budget) {
  if (!(budget.epsilon >= 0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be >= 0, got %g", budget.epsilon));
  }
  if (!(budget.delta >= 0 && budget.delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in [0, 1), got %g", budget.delta));
  }
  return absl::OkStatus();
}

absl::StatusOr<RdpCurve> RdpCurve::Create(std::vector<RdpPoint> points) {
  if (points.empty()) {
    return absl::InvalidArgumentError("RDP curve needs at least one order");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    const RdpPoint& p = points[i];
    if (absl::Status s = CheckAlpha(p.alpha); !s.ok()) return s;
    if (p.alpha != std::floor(p.alpha)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("RDP grid orders must be integers, got %g", p.alpha));
    }
    if (!(p.epsilon >= 0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "RDP epsilon must be >= 0, got %g at alpha %g", p.epsilon, p.alpha));
    }
    if (i > 0 && !(points[i - 1].alpha < p.alpha)) {
      return absl::InvalidArgumentError(
          "RDP grid orders must be strictly increasing");
    }
  }
  return RdpCurve(std::move(points));
}

absl::StatusOr<RdpCurve> RdpCurve::Zero(int alpha_min, int alpha_max) {
  if (alpha_min < 2 || alpha_max < alpha_min) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid order grid [%d, %d]; need 2 <= min <= max", alpha_min,
        alpha_max));
  }
  std::vector<RdpPoint> points;
  points.reserve(alpha_max - alpha_min + 1);
  for (int a = alpha_min; a <= alpha_max; ++a) points.push_back({static_cast<double>(a), 0.0});
  return RdpCurve(std::move(points));
}

bool RdpCurve::SameGrid(const RdpCurve& other) const {
  if (points_.size() != other.points_.size()) return false;
  for (size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].alpha != other.points_[i].alpha) return false;
  }
  return true;
}

absl::Status ValidateGaussianMechanismSpec(const GaussianMechanismSpec& spec) {
  if (!(spec.sensitivity > 0) || !std::isfinite(spec.sensitivity)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sensitivity must be finite and > 0, got %g", spec.sensitivity));
  }
  if (!(spec.noise_std > 0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "noise standard deviation must be > 0, got %g", spec.noise_std));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> GaussianDpEpsilon(const GaussianMechanismSpec& spec,
                                         double delta) {
  if (absl::Status s = ValidateGaussianMechanismSpec(spec); !s.ok()) return s;
  if (absl::Status s = CheckOpenUnitDelta(delta); !s.ok()) return s;
  return std::sqrt(2 * std::log(1.25 / delta)) * spec.sensitivity /
         spec.noise_std;
}

absl::StatusOr<double> GaussianRdpEpsilon(const GaussianMechanismSpec& spec,
                                          double alpha) {
  if (absl::Status s = ValidateGaussianMechanismSpec(spec); !s.ok()) return s;
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  const double ratio = spec.sensitivity / spec.noise_std;
  return alpha * ratio * ratio / 2;
}

absl::StatusOr<DpBudget> RdpToDp(const RdpPoint& point, double delta) {
  if (absl::Status s = CheckAlpha(point.alpha); !s.ok()) return s;
  if (!(point.epsilon >= 0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("RDP epsilon must be >= 0, got %g", point.epsilon));
  }
  if (absl::Status s = CheckOpenUnitDelta(delta); !s.ok()) return s;
  return DpBudget{point.epsilon + std::log(1 / delta) / (point.alpha - 1),
                  delta};
}

absl::StatusOr<RdpCurve> ComposeRdp(const RdpCurve& per_step, int steps) {
  if (steps < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("number of steps must be >= 0, got %d", steps));
  }
  std::vector<RdpPoint> points = per_step.points();
  for (RdpPoint& p : points) p.epsilon *= steps;
  return RdpCurve::Create(std::move(points));
}

absl::StatusOr<RdpCurve> ComposeRdp(std::span<const RdpCurve> curves) {
  if (curves.empty()) {
    return absl::InvalidArgumentError("nothing to compose");
  }
  std::vector<RdpPoint> points = curves.front().points();
  for (const RdpCurve& curve : curves.subspan(1)) {
    if (!curve.SameGrid(curves.front())) {
      return absl::InvalidArgumentError(
          "cannot compose RDP curves defined on different order grids");
    }
    for (size_t i = 0; i < points.size(); ++i) {
      points[i].epsilon += curve.points()[i].epsilon;
    }
  }
  return RdpCurve::Create(std::move(points));
}

absl::StatusOr<DpBudget> AdvancedComposition(double eps_step,
                                             double delta_step, int steps,
                                             double delta_slack) {
  if (!(eps_step >= 0) || !std::isfinite(eps_step)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "per-step epsilon must be finite and >= 0, got %g", eps_step));
  }
  if (!(delta_step >= 0 && delta_step < 1)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "per-step delta must lie in [0, 1), got %g", delta_step));
  }
  if (steps < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("number of steps must be >= 1, got %d", steps));
  }
  if (absl::Status s = CheckOpenUnitDelta(delta_slack); !s.ok()) return s;

  const double k = steps;
  const double epsilon =
      eps_step * std::sqrt(2 * k * std::log(1 / delta_slack)) +
      k * eps_step * std::expm1(eps_step);
  return DpBudget{epsilon, k * delta_step + delta_slack};
}

}  // namespace oac_privacy
