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

// Renyi DP of the Poisson-subsampled Gaussian mechanism.
//
// A data point enters a round with probability `sampling_rate` and the
// released sum carries Gaussian noise whose standard deviation is
// `noise_multiplier` times the L2 sensitivity. Two routes are provided:
//
//  * SampledGaussianRdpNumeric evaluates the exact integer-order divergence
//    D_alpha(mixture || base) between (1-s) N(0, m^2) + s N(1, m^2) and
//    N(0, m^2) through the binomial expansion
//
//      eps(alpha) = 1/(alpha-1) ln sum_k C(alpha,k) (1-s)^(alpha-k) s^k
//                                        exp(k(k-1) / (2 m^2)),
//
//    accumulated in log space (Mironov, Talwar and Zhang, "Renyi
//    Differential Privacy of the Sampled Gaussian Mechanism", sec. 3.3).
//
//  * SampledGaussianRdpBound is the closed form 2 s^2 alpha / m^2, valid
//    only when every condition reported by SampledGaussianBoundConditions
//    holds. It is an upper bound on the numeric value.

#ifndef OAC_PRIVACY_SUBSAMPLED_GAUSSIAN_H_
#define OAC_PRIVACY_SUBSAMPLED_GAUSSIAN_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace oac_privacy {

struct SampledGmSpec {
  // Probability that a given data point is used in one invocation.
  double sampling_rate = 1;
  // Noise standard deviation divided by the L2 sensitivity.
  double noise_multiplier = 1;
};

absl::Status ValidateSampledGmSpec(const SampledGmSpec& spec);

// Validity conditions of the closed-form bound at one order alpha.
struct BoundConditions {
  bool rate_ok = false;   // s <= 1/5
  bool noise_ok = false;  // m >= 4
  // alpha <= m^2/2 ln(1 + 1/(s(alpha-1))) - 2 ln m
  bool alpha_bound_ok = false;
  // alpha <= [m^2/2 ln^2(1 + 1/(s(alpha-1))) - ln 5 - 2 ln m]
  //          / [ln(1 + 1/(s(alpha-1))) + ln(s alpha) + 1/(2 m^2)]
  bool alpha_ratio_bound_ok = false;

  bool AllHold() const {
    return rate_ok && noise_ok && alpha_bound_ok && alpha_ratio_bound_ok;
  }
};

// Fails for sampling_rate == 0, where the conditions are undefined.
absl::StatusOr<BoundConditions> SampledGaussianBoundConditions(
    const SampledGmSpec& spec, double alpha);

// 2 s^2 alpha / m^2. Returns FailedPrecondition naming the first condition
// that does not hold.
absl::StatusOr<double> SampledGaussianRdpBound(const SampledGmSpec& spec,
                                               double alpha);

absl::StatusOr<double> SampledGaussianRdpNumeric(const SampledGmSpec& spec,
                                                 int alpha);

// The value used for accounting: always the exact numeric evaluation.
absl::StatusOr<double> SampledGaussianRdp(const SampledGmSpec& spec,
                                          int alpha);

}  // namespace oac_privacy

#endif  // OAC_PRIVACY_SUBSAMPLED_GAUSSIAN_H_
