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

// Differential privacy primitives for the Gaussian mechanism: the
// (epsilon, delta) and Renyi forms, additive RDP composition, RDP to DP
// conversion and the advanced composition baseline.
//
// All logarithms are natural logarithms.

#ifndef OAC_PRIVACY_PRIVACY_CORE_H_
#define OAC_PRIVACY_PRIVACY_CORE_H_

#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace oac_privacy {

// An (epsilon, delta) differential privacy guarantee.
struct DpBudget {
  double epsilon = 0;
  double delta = 0;

  friend bool operator==(const DpBudget&, const DpBudget&) = default;
};

absl::Status ValidateDpBudget(const DpBudget& budget);

// One point of a Renyi DP curve: the mechanism is (alpha, epsilon)-RDP.
struct RdpPoint {
  double alpha = 2;
  double epsilon = 0;

  friend bool operator==(const RdpPoint&, const RdpPoint&) = default;
};

// RDP bounds of a single mechanism over a grid of integer orders. The grid
// is nonempty and strictly increasing.
class RdpCurve {
 public:
  static absl::StatusOr<RdpCurve> Create(std::vector<RdpPoint> points);

  // Curve with epsilon = 0 at every integer order in [alpha_min, alpha_max].
  static absl::StatusOr<RdpCurve> Zero(int alpha_min, int alpha_max);

  const std::vector<RdpPoint>& points() const { return points_; }
  size_t size() const { return points_.size(); }
  bool SameGrid(const RdpCurve& other) const;

  friend bool operator==(const RdpCurve&, const RdpCurve&) = default;

 private:
  explicit RdpCurve(std::vector<RdpPoint> points)
      : points_(std::move(points)) {}

  std::vector<RdpPoint> points_;
};

// Query sensitivity (L2) and the standard deviation of the added noise, in
// the same units.
struct GaussianMechanismSpec {
  double sensitivity = 1;
  double noise_std = 1;
};

absl::Status ValidateGaussianMechanismSpec(const GaussianMechanismSpec& spec);

// epsilon = sqrt(2 ln(1.25 / delta)) * sensitivity / noise_std.
absl::StatusOr<double> GaussianDpEpsilon(const GaussianMechanismSpec& spec,
                                         double delta);

// epsilon(alpha) = alpha * sensitivity^2 / (2 noise_std^2).
absl::StatusOr<double> GaussianRdpEpsilon(const GaussianMechanismSpec& spec,
                                          double alpha);

// (epsilon + ln(1/delta) / (alpha - 1), delta).
absl::StatusOr<DpBudget> RdpToDp(const RdpPoint& point, double delta);

// Homogeneous composition: every epsilon is multiplied by `steps`. Zero steps
// yields the zero curve on the same grid.
absl::StatusOr<RdpCurve> ComposeRdp(const RdpCurve& per_step, int steps);

// Heterogeneous composition of curves sharing one grid: pointwise sum.
absl::StatusOr<RdpCurve> ComposeRdp(std::span<const RdpCurve> curves);

// Advanced composition of `steps` (eps_step, delta_step)-DP mechanisms:
// eps' = eps_step * sqrt(2 steps ln(1/delta_slack))
//        + steps * eps_step * (exp(eps_step) - 1),
// delta' = steps * delta_step + delta_slack.
absl::StatusOr<DpBudget> AdvancedComposition(double eps_step,
                                             double delta_step, int steps,
                                             double delta_slack);

}  // namespace oac_privacy

#endif  // OAC_PRIVACY_PRIVACY_CORE_H_
