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

#ifndef OLP_KNAPSACK_LP_H_
#define OLP_KNAPSACK_LP_H_

#include <optional>
#include <vector>

namespace olp {

// max c'x  s.t.  A x <= b,  0 <= x <= upper.  A is column-major with m rows;
// b >= 0 so the all-slack basis is feasible.
struct KnapsackLp {
  int m = 0;
  int n = 0;
  std::vector<double> c;
  std::vector<double> a;  // m * n, column j at [j * m, (j + 1) * m)
  std::vector<double> b;
  std::vector<double> upper;  // empty means all ones
};

struct KnapsackLpOptions {
  long max_iterations = 1'000'000;
  // Dual estimate used to pick a feasible starting vertex close to the
  // optimum: items with clearly positive reduced cost start at their upper
  // bound.
  std::optional<std::vector<double>> lambda_guess;
};

struct KnapsackLpSolution {
  std::vector<double> x;
  std::vector<double> slack;
  // Row prices c_B B^-1, clamped at zero.
  std::vector<double> y;
  double value = 0.0;
  long iterations = 0;
  // Basic structural columns at the optimum.
  std::vector<int> basic_columns;
};

// Exact bounded-variable primal simplex. Throws SolverBudgetExceeded when
// max_iterations is hit.
KnapsackLpSolution SolveKnapsackLp(const KnapsackLp& lp,
                                   const KnapsackLpOptions& options = {});

}  // namespace olp

#endif  // OLP_KNAPSACK_LP_H_
