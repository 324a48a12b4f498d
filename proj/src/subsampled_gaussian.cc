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

#include "oac_privacy/subsampled_gaussian.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/strings/str_format.h"

namespace oac_privacy {
namespace {

double LogBinomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double LogSumExp(const std::vector<double>& terms) {
  const double max = *std::max_element(terms.begin(), terms.end());
  if (max == -std::numeric_limits<double>::infinity()) return max;
  double sum = 0;
  for (double t : terms) sum += std::exp(t - max);
  return max + std::log(sum);
}

// ln(exp(x) - 1) for x > 0.
double LogExpm1(double x) {
  return x > 30 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

// ln(1 + exp(x)).
double Log1pExp(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

absl::Status ValidateSampledGmSpec(const SampledGmSpec& spec) {
  if (!(spec.sampling_rate >= 0 && spec.sampling_rate <= 1)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sampling rate must lie in [0, 1], got %g", spec.sampling_rate));
  }
  if (!(spec.noise_multiplier > 0) || !std::isfinite(spec.noise_multiplier)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "noise multiplier must be finite and > 0, got %g",
        spec.noise_multiplier));
  }
  return absl::OkStatus();
}

absl::StatusOr<BoundConditions> SampledGaussianBoundConditions(
    const SampledGmSpec& spec, double alpha) {
  if (absl::Status s = ValidateSampledGmSpec(spec); !s.ok()) return s;
  if (!(alpha > 1) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("alpha must be finite and > 1, got %g", alpha));
  }
  if (spec.sampling_rate == 0) {
    return absl::InvalidArgumentError(
        "bound conditions are undefined for sampling rate 0");
  }
  const double s = spec.sampling_rate;
  const double m = spec.noise_multiplier;
  const double log_m = std::log(m);
  const double log_term = std::log1p(1 / (s * (alpha - 1)));

  BoundConditions c;
  c.rate_ok = s <= 0.2;
  c.noise_ok = m >= 4;
  c.alpha_bound_ok = alpha <= 0.5 * m * m * log_term - 2 * log_m;
  // Evaluated literally; alpha appears on both sides.
  const double numerator =
      0.5 * m * m * log_term * log_term - std::log(5.0) - 2 * log_m;
  const double denominator =
      log_term + std::log(s * alpha) + 1 / (2 * m * m);
  c.alpha_ratio_bound_ok =
      denominator != 0 && alpha <= numerator / denominator;
  return c;
}

absl::StatusOr<double> SampledGaussianRdpBound(const SampledGmSpec& spec,
                                               double alpha) {
  absl::StatusOr<BoundConditions> conditions =
      SampledGaussianBoundConditions(spec, alpha);
  if (!conditions.ok()) return conditions.status();
  const double s = spec.sampling_rate;
  const double m = spec.noise_multiplier;
  if (!conditions->rate_ok) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "rate_ok fails: sampling rate %g exceeds 1/5", s));
  }
  if (!conditions->noise_ok) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "noise_ok fails: noise multiplier %g is below 4", m));
  }
  if (!conditions->alpha_bound_ok) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "alpha_bound_ok fails at alpha %g", alpha));
  }
  if (!conditions->alpha_ratio_bound_ok) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "alpha_ratio_bound_ok fails at alpha %g", alpha));
  }
  return 2 * s * s * alpha / (m * m);
}

absl::StatusOr<double> SampledGaussianRdpNumeric(const SampledGmSpec& spec,
                                                 int alpha) {
  if (absl::Status s = ValidateSampledGmSpec(spec); !s.ok()) return s;
  if (alpha < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("alpha must be an integer >= 2, got %d", alpha));
  }
  const double s = spec.sampling_rate;
  if (s == 0) return 0.0;

  const double m = spec.noise_multiplier;
  const double log_s = std::log(s);
  const double log_1ms = std::log1p(-s);

  // The binomial weights sum to one and the k = 0, 1 exponents vanish, so
  //   series - 1 = sum_{k>=2} C(alpha,k) (1-s)^(alpha-k) s^k
  //                           (exp(k(k-1)/(2 m^2)) - 1),
  // a sum of nonnegative terms. Working with it directly keeps full relative
  // precision when the series is close to one. Terms with a zero factor
  // (1-s)^(alpha-k) are omitted.
  std::vector<double> log_terms;
  log_terms.reserve(alpha - 1);
  for (int k = 2; k <= alpha; ++k) {
    if (s == 1 && k < alpha) continue;
    double t = LogBinomial(alpha, k) + k * log_s +
               LogExpm1(k * (k - 1) / (2 * m * m));
    if (k < alpha) t += (alpha - k) * log_1ms;
    log_terms.push_back(t);
  }
  return Log1pExp(LogSumExp(log_terms)) / (alpha - 1);
}

absl::StatusOr<double> SampledGaussianRdp(const SampledGmSpec& spec,
                                          int alpha) {
  return SampledGaussianRdpNumeric(spec, alpha);
}

}  // namespace oac_privacy
