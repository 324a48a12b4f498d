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

#include <cmath>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "renyi_quadrature.h"

namespace oac_privacy {
namespace {

using ::oac_privacy::testing::RenyiDivergenceByQuadrature;
using ::testing::HasSubstr;

TEST(BoundConditionsTest, AllHoldForSmallRateLargeNoise) {
  // Right-hand sides evaluate to about 34.1 and 226.
  BoundConditions c = *SampledGaussianBoundConditions({0.01, 4}, 2);
  EXPECT_TRUE(c.rate_ok);
  EXPECT_TRUE(c.noise_ok);
  EXPECT_TRUE(c.alpha_bound_ok);
  EXPECT_TRUE(c.alpha_ratio_bound_ok);
  EXPECT_TRUE(c.AllHold());
}

TEST(BoundConditionsTest, IndividualFailures) {
  EXPECT_FALSE(SampledGaussianBoundConditions({0.5, 4}, 2)->rate_ok);
  EXPECT_FALSE(SampledGaussianBoundConditions({0.01, 1}, 2)->noise_ok);
  // The first inequality caps alpha at ~34 for (0.01, 4).
  BoundConditions c = *SampledGaussianBoundConditions({0.01, 4}, 40);
  EXPECT_FALSE(c.alpha_bound_ok);
}

TEST(BoundConditionsTest, UndefinedAtZeroRate) {
  EXPECT_FALSE(SampledGaussianBoundConditions({0, 4}, 2).ok());
  EXPECT_FALSE(SampledGaussianBoundConditions({0.1, 4}, 1).ok());
}

TEST(SampledGaussianRdpBoundTest, ClosedForm) {
  EXPECT_NEAR(*SampledGaussianRdpBound({0.01, 4}, 2), 2.5e-5, 1e-19);
  // Conditions at (0.1, 4, 2): ~16.4 and ~50.8, both >= 2.
  EXPECT_NEAR(*SampledGaussianRdpBound({0.1, 4}, 2), 0.0025, 1e-17);
}

TEST(SampledGaussianRdpBoundTest, NamesFailedCondition) {
  absl::StatusOr<double> bound = SampledGaussianRdpBound({0.5, 4}, 2);
  EXPECT_EQ(bound.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(bound.status().message(), HasSubstr("rate_ok"));
  bound = SampledGaussianRdpBound({0.1, 2}, 2);
  EXPECT_THAT(bound.status().message(), HasSubstr("noise_ok"));
  bound = SampledGaussianRdpBound({0.01, 4}, 40);
  EXPECT_THAT(bound.status().message(), HasSubstr("alpha_bound_ok"));
}

TEST(SampledGaussianRdpNumericTest, ZeroRate) {
  for (int alpha : {2, 10, 64}) {
    EXPECT_EQ(*SampledGaussianRdpNumeric({0, 0.3}, alpha), 0.0);
  }
}

TEST(SampledGaussianRdpNumericTest, FullRateReducesToGaussian) {
  for (double m : {0.5, 1.0, 2.0, 4.0}) {
    for (int alpha = 2; alpha <= 64; ++alpha) {
      const double expected = alpha / (2 * m * m);
      EXPECT_NEAR(*SampledGaussianRdpNumeric({1, m}, alpha), expected,
                  1e-9 * expected);
    }
  }
}

TEST(SampledGaussianRdpNumericTest, SecondOrderClosedForm) {
  // ln(1 + s^2 (e^{1/m^2} - 1)) at s = 0.5, m = 1.
  EXPECT_NEAR(*SampledGaussianRdpNumeric({0.5, 1}, 2), 0.35737401950878854,
              1e-13);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rate(0.001, 1), noise(0.5, 8);
  for (int i = 0; i < 100; ++i) {
    const double s = rate(rng), m = noise(rng);
    EXPECT_NEAR(*SampledGaussianRdpNumeric({s, m}, 2),
                std::log1p(s * s * std::expm1(1 / (m * m))), 1e-12);
  }
}

TEST(SampledGaussianRdpNumericTest, AgreesWithQuadrature) {
  for (double s : {0.01, 0.1, 0.5}) {
    for (double m : {1.0, 4.0}) {
      for (int alpha : {2, 8, 32}) {
        EXPECT_NEAR(*SampledGaussianRdpNumeric({s, m}, alpha),
                    RenyiDivergenceByQuadrature(s, m, alpha), 1e-4)
            << "s=" << s << " m=" << m << " alpha=" << alpha;
      }
    }
  }
}

TEST(SampledGaussianRdpNumericTest, FrozenValues) {
  // 40-digit evaluation of the series, cross-checked by adaptive quadrature.
  EXPECT_NEAR(*SampledGaussianRdpNumeric({0.01, 1}, 32), 11.2462759370481,
              1e-10);
  EXPECT_NEAR(*SampledGaussianRdpNumeric({0.1, 1}, 8), 1.37836141134813,
              1e-11);
  EXPECT_NEAR(*SampledGaussianRdpNumeric({0.5, 4}, 32), 0.444779481971411,
              1e-12);
  EXPECT_NEAR(*SampledGaussianRdpNumeric({0.01, 4}, 2), 6.44942509419921e-6,
              1e-16);
}

TEST(SampledGaussianRdpNumericTest, NoOverflowAtLargeExponents) {
  // Largest exponent is 64 * 63 / (2 * 0.25) = 8064.
  const double eps = *SampledGaussianRdpNumeric({0.5, 0.5}, 64);
  EXPECT_TRUE(std::isfinite(eps));
  EXPECT_GT(eps, 100);
}

TEST(SampledGaussianRdpNumericTest, KeepsRelativePrecisionAtTinyRates) {
  // 60-digit evaluations of the series.
  const double tiny = *SampledGaussianRdpNumeric({1e-14, 0.5}, 8);
  EXPECT_NEAR(tiny, 2.1439260014558440e-26, 1e-10 * 2.1439260014558440e-26);
  const double small = *SampledGaussianRdpNumeric({1e-6, 100}, 16);
  EXPECT_NEAR(small, 8.0004000245351485e-16, 1e-10 * 8.0004000245351485e-16);
}

TEST(SampledGaussianRdpNumericTest, RejectsBadInputs) {
  EXPECT_FALSE(SampledGaussianRdpNumeric({0.5, 1}, 1).ok());
  EXPECT_FALSE(SampledGaussianRdpNumeric({1.5, 1}, 2).ok());
  EXPECT_FALSE(SampledGaussianRdpNumeric({-0.1, 1}, 2).ok());
  EXPECT_FALSE(SampledGaussianRdpNumeric({0.5, 0}, 2).ok());
}

TEST(SampledGaussianRdpNumericTest, Monotonicity) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> rate(0, 1), noise(0.5, 8);
  std::uniform_int_distribution<int> order(2, 63);
  auto eps = [](double s, double m, int a) {
    return *SampledGaussianRdpNumeric({s, m}, a);
  };
  for (int i = 0; i < 300; ++i) {
    double s1 = rate(rng), s2 = rate(rng);
    if (s1 > s2) std::swap(s1, s2);
    double m1 = noise(rng), m2 = noise(rng);
    if (m1 > m2) std::swap(m1, m2);
    const int a = order(rng);
    const double m = noise(rng), s = rate(rng);
    EXPECT_LE(eps(s1, m, a), eps(s2, m, a) * (1 + 1e-12) + 1e-300);
    EXPECT_LE(eps(s, m, a), eps(s, m, a + 1) * (1 + 1e-12) + 1e-300);
    EXPECT_GE(eps(s, m1, a) * (1 + 1e-12) + 1e-300, eps(s, m2, a));
  }
}

TEST(SampledGaussianRdpTest, DispatchesToNumeric) {
  const double bound = *SampledGaussianRdpBound({0.01, 4}, 2);
  EXPECT_LE(*SampledGaussianRdp({0.01, 4}, 2), bound);
  EXPECT_NEAR(*SampledGaussianRdp({1, 1}, 2), 1.0, 1e-15);
  EXPECT_EQ(*SampledGaussianRdp({0, 1}, 64), 0.0);
}

TEST(SampledGaussianRdpTest, NumericNeverExceedsBoundWhereValid) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> rate(1e-4, 0.2), noise(4, 40);
  std::uniform_int_distribution<int> order(2, 64);
  int checked = 0;
  for (int i = 0; i < 5000 && checked < 500; ++i) {
    const SampledGmSpec spec{rate(rng), noise(rng)};
    const int alpha = order(rng);
    absl::StatusOr<BoundConditions> c =
        SampledGaussianBoundConditions(spec, alpha);
    if (!c->AllHold()) continue;
    ++checked;
    EXPECT_LE(*SampledGaussianRdpNumeric(spec, alpha),
              *SampledGaussianRdpBound(spec, alpha));
  }
  EXPECT_EQ(checked, 500);
}

}  // namespace
}  // namespace oac_privacy
