// Copyright 2026 The olp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "olp/reward_law.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "olp/errors.h"
#include "oracles.h"

namespace olp {
namespace {

std::vector<RewardLaw> Laws() {
  return {RewardLaw::Uniform(1.0, 2.0),
          RewardLaw::UniformMixture({{0.0, 1.0, 0.5}, {2.0, 3.0, 0.5}}),
          RewardLaw::SymmetricPower(0.0),
          RewardLaw::SymmetricPower(2.0),
          RewardLaw::SymmetricPower(0.5).Shifted(-0.25)};
}

TEST(RewardLawTest, HingeMatchesSimpsonOfTail) {
  // E[(X - c)^+] = int_c^inf P(X > z) dz.
  for (const RewardLaw& law : Laws()) {
    for (double c : {-1.0, 0.0, 0.3, 0.5, 1.2, 2.5, 4.0}) {
      const double hi = law.SupportHi();
      const double lo = std::max(c, law.SupportLo());
      double expect = std::max(0.0, law.SupportLo() - c);
      if (hi > lo) {
        expect += oracle::Simpson([&](double z) { return law.Tail(z); }, lo, hi, 40000);
      }
      EXPECT_NEAR(law.Hinge(c), expect, 1e-7) << "c=" << c;
    }
  }
}

TEST(RewardLawTest, MeanIsHingeAtLowerSupport) {
  for (const RewardLaw& law : Laws()) {
    const double lo = law.SupportLo();
    EXPECT_NEAR(law.Mean(), lo + law.Hinge(lo), 1e-12);
  }
  EXPECT_NEAR(RewardLaw::Uniform(1.0, 2.0).Mean(), 1.5, 1e-15);
  EXPECT_NEAR(RewardLaw::PointMass(0.7).Hinge(0.2), 0.5, 1e-15);
}

TEST(RewardLawTest, QuantileInvertsCdf) {
  for (const RewardLaw& law : Laws()) {
    for (double p : {0.01, 0.1, 0.25, 0.5, 0.75, 0.99, 1.0}) {
      const double z = law.Quantile(p);
      EXPECT_GE(law.Cdf(z), p - 1e-12);
      EXPECT_LT(law.Cdf(z - 1e-7), p + 1e-12);
    }
  }
  // The gap mixture's median is the left end of the gap.
  EXPECT_NEAR(RewardLaw::UniformMixture({{0.0, 1.0, 0.5}, {2.0, 3.0, 0.5}}).Quantile(0.5), 1.0,
              1e-12);
}

TEST(RewardLawTest, SymmetricPowerCdfHasReverseHolderShape) {
  // F(1/2 + z) - F(1/2) = (2z)^(1 + beta) / 2 on [0, 1/2].
  for (double beta : {0.0, 1.0, 2.0}) {
    const RewardLaw law = RewardLaw::SymmetricPower(beta);
    for (double z : {0.01, 0.1, 0.3}) {
      EXPECT_NEAR(law.Cdf(0.5 + z) - law.Cdf(0.5), 0.5 * std::pow(2.0 * z, 1.0 + beta), 1e-12);
    }
  }
}

TEST(RewardLawTest, CdfIntegralMatchesSimpson) {
  for (const RewardLaw& law : Laws()) {
    const double expect =
        oracle::Simpson([&](double z) { return law.Cdf(z); }, -0.5, 2.7, 64000);
    EXPECT_NEAR(law.CdfIntegral(-0.5, 2.7), expect, 1e-6);
  }
}

TEST(RewardLawTest, SamplesFollowTheCdf) {
  const RewardLaw law = RewardLaw::SymmetricPower(2.0);
  const int n = 100000;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    if (law.Sample(u) <= 0.3) ++below;
  }
  EXPECT_NEAR(static_cast<double>(below) / n, law.Cdf(0.3), 1e-4);
}

TEST(RewardLawTest, RejectsBadMixtures) {
  EXPECT_THROW(RewardLaw::UniformMixture({{0.0, 1.0, 0.4}}), OlpError);
  EXPECT_THROW(RewardLaw::UniformMixture({{0.0, 1.0, 0.5}, {0.5, 2.0, 0.5}}), OlpError);
  EXPECT_THROW(RewardLaw::Uniform(2.0, 1.0), OlpError);
}

TEST(RewardLawTest, ShiftMovesEverything) {
  const RewardLaw base = RewardLaw::Uniform(0.0, 1.0);
  const RewardLaw s = base.Shifted(2.0);
  EXPECT_NEAR(s.Cdf(2.25), base.Cdf(0.25), 1e-15);
  EXPECT_NEAR(s.Hinge(2.5), base.Hinge(0.5), 1e-15);
  EXPECT_NEAR(s.Mean(), 2.5, 1e-15);
  EXPECT_NEAR(s.SupportLo(), 2.0, 1e-15);
}

}  // namespace
}  // namespace olp
