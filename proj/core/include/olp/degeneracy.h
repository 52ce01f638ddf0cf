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

#ifndef OLP_DEGENERACY_H_
#define OLP_DEGENERACY_H_

#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "olp/distributions.h"
#include "olp/fluid_dual.h"

namespace olp {

// Optimal pair of the deterministic LP of a discrete distribution:
// max sum p_j r_j x_j  s.t.  sum p_j a_j x_j <= d,  x in [0, 1].
struct DlpSolution {
  Vec x;
  Vec lambda;
  Vec eta;  // p_j (r_j - a_j'lambda)^+
  double primal_value = 0.0;
  double dual_value = 0.0;
};

// Dual from the fluid solver, primal by complementary slackness. Throws
// InvalidArgument for non-discrete kinds.
DlpSolution SolveDlp(const RequestDistribution& dist, std::span<const double> d,
                     const SolverConfig& cfg = {});

struct NondegeneracyResult {
  bool nondegenerate = false;
  // |{j : x_j in {0, 1}}| + |{i : resource i binds}|, at tolerance 1e-7.
  int count = 0;
};

NondegeneracyResult DlpNondegeneracyCheck(const DlpSolution& sol,
                                          const RequestDistribution& dist,
                                          std::span<const double> d);

// Continuous rewards: lambda_i = 0 exactly when resource i has slack, at
// tolerance 1e-7. Discrete rewards: the dual is unique and every primal-dual
// pair is strictly complementary (lambda_i + slack_i > 0 and, per atom,
// eta_j + (1 - x_j) > 0 and reduced cost + x_j > 0).
bool StrictCsCheck(const RequestDistribution& dist, std::span<const double> d,
                   std::span<const double> lambda, const SolverConfig& cfg = {});

// One-sided: false when a probe finds a distinct optimum.
bool DualUniquenessCheck(const RequestDistribution& dist, std::span<const double> d,
                         const SolverConfig& cfg = {});

// d = E[a 1{r > a'lambda0}] for lambda0 in the dual box with a zero entry.
Vec MakeDegenerateInventory(const RequestDistribution& dist,
                            std::span<const double> lambda0);

struct DegeneracyVerdict {
  Vec d;
  Vec lambda;
  double value = 0.0;
  bool dual_unique = false;
  bool strict_cs = false;
  // Discrete kinds only.
  std::optional<bool> dlp_nondegenerate;
  std::optional<int> nondeg_count;
  std::vector<Vec> flat_directions;
  std::string details;

  nlohmann::json ToJson() const;
};

DegeneracyVerdict Diagnose(const RequestDistribution& dist, std::span<const double> d,
                           const SolverConfig& cfg = {});

}  // namespace olp

#endif  // OLP_DEGENERACY_H_
