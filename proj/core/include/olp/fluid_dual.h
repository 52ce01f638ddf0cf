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

#ifndef OLP_FLUID_DUAL_H_
#define OLP_FLUID_DUAL_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "olp/distributions.h"

namespace olp {

// The dual search box [0, upper]^m.
struct DualDomain {
  int m = 1;
  Vec upper;

  static DualDomain For(const RequestDistribution& dist);
  double Diameter() const;
  bool Contains(std::span<const double> lambda, double slack = 0.0) const;
  Vec Project(std::span<const double> lambda) const;
  // Largest t >= 0 with lambda + t u inside the box.
  double MaxStep(std::span<const double> lambda, std::span<const double> u) const;
};

enum class StepRule { kPolyakLike, kDiminishing };
// Which point of a non-unique optimal set the exact one-dimensional solvers
// return. Multi-dimensional solvers return the vertex or limit they reach.
enum class TieBreak { kSmallest, kLargest, kMidpoint };

std::string StepRuleName(StepRule rule);
std::string TieBreakName(TieBreak tie);
StepRule ParseStepRule(const std::string& name);
TieBreak ParseTieBreak(const std::string& name);

struct SolverConfig {
  long max_iters = 20000;
  // Unset means 1e-8 for exact expectations and 1e-6 for quadrature kinds.
  std::optional<double> tol;
  int grid_resolution = 2000;
  StepRule step_rule = StepRule::kPolyakLike;
  TieBreak tie_break = TieBreak::kSmallest;
  // Populate DualSolution::flat_directions.
  bool probe_flat = false;
};

double ResolvedTol(const RequestDistribution& dist, const SolverConfig& cfg);
void ValidateSolverConfig(const SolverConfig& cfg);

struct DualSolution {
  Vec lambda;
  double value = 0.0;
  double subgrad_norm = 0.0;
  std::vector<Vec> flat_directions;
  // Upper bound on value - min over the box.
  double certified_gap = 0.0;
  long iterations = 0;
};

struct SolverTraceRow {
  long iter = 0;
  double value = 0.0;
  double subgrad_norm = 0.0;
};

void WriteSolverTraceCsv(std::ostream& out, const std::vector<SolverTraceRow>& rows);

struct SolveHints {
  const Vec* warm_start = nullptr;
  std::vector<SolverTraceRow>* trace = nullptr;
};

// Breakpoint of the one-dimensional piecewise-linear dual
// d lambda + sum_j w_j (r_j - a_j lambda)^+ with rho = r_j / a_j and
// weight = w_j a_j (a_j > 0).
struct ScanItem {
  double rho;
  double weight;
};

// Minimizer over [0, upper] chosen by `tie` among the optimal segment.
double ScanPiecewiseLinear(std::vector<ScanItem> items, double d, double upper,
                           TieBreak tie);

// d'lambda + E[(r - a'lambda)^+].
double FluidObjective(const RequestDistribution& dist, std::span<const double> d,
                      std::span<const double> lambda);
// Same value through E r - E[a'lambda] + E int F, for cross-checks.
double FluidObjectiveIntegralForm(const RequestDistribution& dist,
                                  std::span<const double> d,
                                  std::span<const double> lambda);
// d - E[a 1{r > a'lambda}]; the gradient wherever the conditional CDFs are
// continuous at a'lambda.
Vec FluidSubgradient(const RequestDistribution& dist, std::span<const double> d,
                     std::span<const double> lambda);

// Upper bound on f(lambda) - min_box f from a subgradient g at lambda.
double BoxGapBound(const DualDomain& domain, std::span<const double> lambda,
                   std::span<const double> g);

DualSolution SolveFluidDual(const RequestDistribution& dist, std::span<const double> d,
                            const SolverConfig& cfg, SolveHints hints = {});
double FluidValue(const RequestDistribution& dist, std::span<const double> d,
                  const SolverConfig& cfg = {});

// Unit directions u along which f stays within 10 tol of f(lambda) for a
// distance of at least the probe radius. One-sided: empty means none found.
std::vector<Vec> ProbeFlatDirections(const RequestDistribution& dist,
                                     std::span<const double> d,
                                     std::span<const double> lambda,
                                     const SolverConfig& cfg);

// Local growth exponent gamma in f(l + e u) - f(l) - g'e u ~ e^(2 + gamma),
// measured from the edge of the optimal set. Throws DegenerateFit when
// lambda sits inside a flat segment or no gap is measurable.
double EstimateGrowthExponent(const RequestDistribution& dist,
                              std::span<const double> d,
                              std::span<const double> lambda,
                              const SolverConfig& cfg = {});

}  // namespace olp

#endif  // OLP_FLUID_DUAL_H_
