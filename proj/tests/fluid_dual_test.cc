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

#include "olp/fluid_dual.h"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "olp/errors.h"
#include "oracles.h"
#include "test_util.h"

namespace olp {
namespace {

double Norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

TEST(FluidDualTest, TwoPointFlatSegment) {
  const RequestDistribution dist = RequestDistribution::TwoPointConsumption();
  const Vec d = {0.5};
  // f(l) = l/2 + (1/2) E(r - l)^+ + (1/2) E(r - 4l)^+ with r ~ U[1, 2].
  EXPECT_NEAR(FluidObjective(dist, d, Vec{0.5}), 0.75, 1e-12);
  EXPECT_NEAR(FluidObjective(dist, d, Vec{1.0}), 0.75, 1e-12);
  EXPECT_NEAR(FluidObjective(dist, d, Vec{0.75}), 0.75, 1e-12);
  const DualSolution sol = SolveFluidDual(dist, d, {});
  EXPECT_NEAR(sol.value, 0.75, 1e-9);
  EXPECT_GE(sol.lambda[0], 0.5 - 1e-9);
  EXPECT_LE(sol.lambda[0], 1.0 + 1e-9);
  EXPECT_FALSE(ProbeFlatDirections(dist, d, sol.lambda, {}).empty());
}

TEST(FluidDualTest, TieBreaksPickEndsOfTheOptimalSegment) {
  const RequestDistribution gap = RequestDistribution::GapMultisecretary();
  SolverConfig cfg;
  cfg.tie_break = TieBreak::kSmallest;
  EXPECT_NEAR(SolveFluidDual(gap, Vec{0.5}, cfg).lambda[0], 1.0, 1e-9);
  cfg.tie_break = TieBreak::kLargest;
  EXPECT_NEAR(SolveFluidDual(gap, Vec{0.5}, cfg).lambda[0], 2.0, 1e-9);
  cfg.tie_break = TieBreak::kMidpoint;
  EXPECT_NEAR(SolveFluidDual(gap, Vec{0.5}, cfg).lambda[0], 1.5, 1e-9);

  const RequestDistribution two = RequestDistribution::TwoPointConsumption();
  cfg.tie_break = TieBreak::kSmallest;
  EXPECT_NEAR(SolveFluidDual(two, Vec{0.5}, cfg).lambda[0], 0.5, 1e-9);
  cfg.tie_break = TieBreak::kLargest;
  EXPECT_NEAR(SolveFluidDual(two, Vec{0.5}, cfg).lambda[0], 1.0, 1e-9);
}

TEST(FluidDualTest, KinkOptimumSurvivesRoundingOfTheBreakpoint) {
  // The optimum sits where a'lambda = r for the first atom; for many r the
  // product a * (r / a) lands one ulp below r.
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> eps(-1e-6, 1e-6);
  for (int rep = 0; rep < 200; ++rep) {
    const double r = 0.25 + eps(gen);
    const RequestDistribution dist =
        RequestDistribution::Discrete({{{0.625}, r, 5.0 / 9.0}, {{0.375}, 1.75, 4.0 / 9.0}});
    const Vec d{0.625 * 5.0 / 9.0};
    const DualSolution sol = SolveFluidDual(dist, d, {});
    EXPECT_NEAR(sol.lambda[0], r / 0.625, 1e-12);
    EXPECT_LE(sol.certified_gap, 1e-8);
  }
}

TEST(FluidDualTest, MultisecretaryIsTheRewardQuantile) {
  for (double beta : {0.0, 0.5, 2.0}) {
    const RequestDistribution dist = RequestDistribution::MultisecretaryBeta(beta);
    for (double d : {0.1, 0.3, 0.5, 0.8}) {
      const DualSolution sol = SolveFluidDual(dist, Vec{d}, {});
      const double grid = oracle::GridArgmin1(
          [&](double l) { return FluidObjective(dist, Vec{d}, Vec{l}); }, 0.0, 1.0);
      EXPECT_NEAR(sol.lambda[0], grid, beta > 1.0 && d == 0.5 ? 2e-4 : 1e-6)
          << "beta=" << beta << " d=" << d;
      EXPECT_NEAR(dist.ConsumptionExpectation(sol.lambda)[0], d, 1e-12);
    }
  }
  EXPECT_NEAR(SolveFluidDual(RequestDistribution::MultisecretaryBeta(0.0), Vec{0.5}, {}).lambda[0],
              0.5, 1e-12);
  // Enough inventory for everything prices at zero.
  EXPECT_EQ(SolveFluidDual(RequestDistribution::MultisecretaryBeta(0.0), Vec{1.2}, {}).lambda[0],
            0.0);
}

TEST(FluidDualTest, UnitSquareDegenerateInventory) {
  const RequestDistribution dist = RequestDistribution::UnitSquareShifted();
  const DualSolution sol = SolveFluidDual(dist, Vec{1.5}, {});
  EXPECT_LE(Norm(sol.lambda), 1e-6);
  const double gamma = EstimateGrowthExponent(dist, Vec{1.5}, sol.lambda);
  EXPECT_GE(gamma, 0.8);
  EXPECT_LE(gamma, 1.2);
}

TEST(FluidDualTest, GrowthExponentTracksBeta) {
  for (double beta : {0.0, 1.0, 2.0}) {
    const RequestDistribution dist = RequestDistribution::MultisecretaryBeta(beta);
    const DualSolution sol = SolveFluidDual(dist, Vec{0.5}, {});
    EXPECT_NEAR(EstimateGrowthExponent(dist, Vec{0.5}, sol.lambda), beta, 0.2) << beta;
  }
}

TEST(FluidDualTest, GrowthExponentRefusesInteriorOfFlatSet) {
  const RequestDistribution gap = RequestDistribution::GapMultisecretary();
  try {
    EstimateGrowthExponent(gap, Vec{0.5}, Vec{1.5});
    FAIL() << "expected DegenerateFit";
  } catch (const OlpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateFit);
  }
}

TEST(FluidDualTest, DiscreteMultiResourceMatchesVertexEnumeration) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int m = 2 + rep % 2;
    const int n = 3 + rep % 4;
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      Atom at;
      for (int i = 0; i < m; ++i) at.a.push_back(0.2 + u(gen));
      at.r = u(gen);
      at.p = 0.2 + u(gen);
      total += at.p;
      atoms.push_back(at);
    }
    for (Atom& at : atoms) at.p /= total;
    const RequestDistribution dist = RequestDistribution::Discrete(atoms);
    Vec d(m);
    for (int i = 0; i < m; ++i) d[i] = 0.1 + 0.5 * u(gen);
    const DualSolution sol = SolveFluidDual(dist, d, {});
    const oracle::VertexResult ref =
        oracle::VertexEnumeration(testing::AtomItems(dist), d, dist.DualUpper());
    EXPECT_NEAR(sol.value, ref.value, 1e-9) << "rep " << rep;
    EXPECT_LE(sol.certified_gap, 1e-8);
  }
}

TEST(FluidDualTest, SmoothMultiResourceMatchesGrid) {
  const RequestDistribution cube = RequestDistribution::HyperCube(2);
  for (StepRule rule : {StepRule::kPolyakLike, StepRule::kDiminishing}) {
    SolverConfig cfg;
    cfg.step_rule = rule;
    for (const Vec& d : {Vec{0.3, 0.3}, Vec{0.2, 0.6}, Vec{1.0, 0.1}}) {
      std::vector<SolverTraceRow> trace;
      SolveHints hints;
      hints.trace = &trace;
      const DualSolution sol = SolveFluidDual(cube, d, cfg, hints);
      // Same quadrature, independent minimizer.
      double best = 1e100;
      for (int i = 0; i <= 200; ++i) {
        for (int j = 0; j <= 200; ++j) {
          best = std::min(best, FluidObjective(cube, d, Vec{i / 200.0, j / 200.0}));
        }
      }
      EXPECT_LE(sol.value, best + 1e-6) << StepRuleName(rule);
      EXPECT_GE(sol.value, best - 5e-4) << StepRuleName(rule);
      EXPECT_LE(sol.certified_gap, 1e-6);
      ASSERT_FALSE(trace.empty());
      EXPECT_EQ(trace.front().iter, 0);
      for (size_t k = 1; k < trace.size(); ++k) EXPECT_EQ(trace[k].iter, trace[k - 1].iter + 1);
      EXPECT_LE(sol.value, trace.front().value + 1e-15);
    }
  }
}

TEST(FluidDualTest, BoxGapBoundDominatesTrueGap) {
  const RequestDistribution cube = RequestDistribution::HyperCube(2);
  const DualDomain dom = DualDomain::For(cube);
  const Vec d = {0.4, 0.25};
  const double fstar = SolveFluidDual(cube, d, {}).value;
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Vec l = {u(gen), u(gen)};
    const Vec g = FluidSubgradient(cube, d, l);
    EXPECT_GE(BoxGapBound(dom, l, g) + 1e-7, FluidObjective(cube, d, l) - fstar);
  }
}

TEST(FluidDualTest, SubgradientInequalityHolds) {
  // f(y) >= f(x) + g(x)'(y - x) is the defining property of a subgradient.
  const RequestDistribution dist = RequestDistribution::Discrete(
      {{{1.0, 0.5}, 1.0, 0.5}, {{0.2, 1.0}, 0.8, 0.3}, {{1.0, 1.0}, 1.5, 0.2}});
  const Vec d = {0.3, 0.2};
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const Vec x = {u(gen), u(gen)}, y = {u(gen), u(gen)};
    const Vec g = FluidSubgradient(dist, d, x);
    const double lin = FluidObjective(dist, d, x) + g[0] * (y[0] - x[0]) + g[1] * (y[1] - x[1]);
    EXPECT_GE(FluidObjective(dist, d, y), lin - 1e-12);
  }
}

TEST(FluidDualTest, ScanPiecewiseLinear) {
  // 0.5 l + (2 - l)^+ * 0.5 + (1 - l)^+ * 0.5: slope -0.5 on [0,1], 0 on [1,2].
  const std::vector<ScanItem> items = {{2.0, 0.5}, {1.0, 0.5}};
  EXPECT_NEAR(ScanPiecewiseLinear(items, 0.5, 5.0, TieBreak::kSmallest), 1.0, 1e-15);
  EXPECT_NEAR(ScanPiecewiseLinear(items, 0.5, 5.0, TieBreak::kLargest), 2.0, 1e-15);
  EXPECT_NEAR(ScanPiecewiseLinear(items, 0.5, 5.0, TieBreak::kMidpoint), 1.5, 1e-15);
  EXPECT_NEAR(ScanPiecewiseLinear(items, 0.75, 5.0, TieBreak::kLargest), 1.0, 1e-15);
  EXPECT_EQ(ScanPiecewiseLinear(items, 2.0, 5.0, TieBreak::kSmallest), 0.0);
  EXPECT_EQ(ScanPiecewiseLinear(items, 0.0, 5.0, TieBreak::kSmallest), 2.0);
}

TEST(FluidDualTest, ValidationAndErrors) {
  const RequestDistribution dist = RequestDistribution::MultisecretaryBeta(0.0);
  EXPECT_THROW(SolveFluidDual(dist, Vec{-0.1}, {}), OlpError);
  EXPECT_THROW(SolveFluidDual(dist, Vec{0.5, 0.5}, {}), OlpError);
  SolverConfig bad;
  bad.max_iters = 0;
  EXPECT_THROW(ValidateSolverConfig(bad), OlpError);
  EXPECT_THROW(ParseStepRule("fast"), OlpError);
  EXPECT_EQ(ParseTieBreak(TieBreakName(TieBreak::kMidpoint)), TieBreak::kMidpoint);
  EXPECT_EQ(ParseStepRule(StepRuleName(StepRule::kDiminishing)), StepRule::kDiminishing);

  SolverConfig starved;
  starved.max_iters = 2;
  try {
    SolveFluidDual(RequestDistribution::HyperCube(2), Vec{0.3, 0.2}, starved);
    FAIL() << "expected SolverBudgetExceeded";
  } catch (const OlpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSolverBudgetExceeded);
  }
}

TEST(FluidDualTest, DomainHelpers) {
  DualDomain dom{2, {1.0, 2.0}};
  EXPECT_NEAR(dom.Diameter(), std::sqrt(5.0), 1e-15);
  EXPECT_TRUE(dom.Contains(Vec{0.5, 2.0}));
  EXPECT_FALSE(dom.Contains(Vec{-0.1, 1.0}));
  EXPECT_EQ(dom.Project(Vec{-1.0, 3.0}), Vec({0.0, 2.0}));
  EXPECT_NEAR(dom.MaxStep(Vec{0.5, 1.0}, Vec{1.0, 0.0}), 0.5, 1e-15);
}

TEST(FluidDualTest, FlatProbesInHigherDimensions) {
  // Two identical resources: the optimum is a segment along (1, -1).
  const RequestDistribution dup =
      RequestDistribution::Discrete({{{1.0, 1.0}, 1.0, 0.5}, {{1.0, 1.0}, 3.0, 0.5}});
  const Vec d = {0.5, 0.5};
  const DualSolution sol = SolveFluidDual(dup, d, {});
  EXPECT_FALSE(ProbeFlatDirections(dup, d, sol.lambda, {}).empty());
  // A generic instance has a unique optimum.
  const RequestDistribution gen = RequestDistribution::Discrete(
      {{{1.0, 0.2}, 1.0, 0.4}, {{0.3, 1.0}, 1.2, 0.4}, {{1.0, 1.0}, 0.5, 0.2}});
  const Vec d2 = {0.3, 0.3};
  const DualSolution s2 = SolveFluidDual(gen, d2, {});
  EXPECT_TRUE(ProbeFlatDirections(gen, d2, s2.lambda, {}).empty());
  // A smooth kind with positive density is strictly convex near its optimum.
  const RequestDistribution cube = RequestDistribution::HyperCube(2);
  const DualSolution s3 = SolveFluidDual(cube, Vec{0.3, 0.3}, {});
  EXPECT_TRUE(ProbeFlatDirections(cube, Vec{0.3, 0.3}, s3.lambda, {}).empty());
}

TEST(FluidDualTest, TraceCsv) {
  std::ostringstream os;
  WriteSolverTraceCsv(os, {{0, 1.5, 0.25}, {1, 1.25, 0.0}});
  EXPECT_EQ(os.str(), "iter,value,subgrad_norm\n0,1.5,0.25\n1,1.25,0\n");
}

}  // namespace
}  // namespace olp
