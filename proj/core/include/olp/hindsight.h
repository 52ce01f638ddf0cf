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

#ifndef OLP_HINDSIGHT_H_
#define OLP_HINDSIGHT_H_

#include <iosfwd>
#include <span>
#include <vector>

#include "olp/distributions.h"
#include "olp/fluid_dual.h"

namespace olp {

// A realized request sequence.
struct RequestSample {
  int m = 1;
  std::vector<Request> items;

  size_t size() const { return items.size(); }
  // Items [first, size()).
  RequestSample Tail(size_t first) const;

  // Header a_1,...,a_m,r then one row per item.
  void WriteCsv(std::ostream& out) const;
  static RequestSample ReadCsv(std::istream& in);
};

struct Allocation {
  Vec x;
  double value = 0.0;
  int fractional_count = 0;
};

// Box [0, max(r)^+ / min positive a_i]^m holding an optimum of the empirical
// dual.
DualDomain SampleDomain(const RequestSample& sample);

// b'lambda + sum_j (r_j - a_j'lambda)^+.
double EmpiricalDualObjective(const RequestSample& sample, std::span<const double> b,
                              std::span<const double> lambda);
// b - sum_j a_j 1{r_j > a_j'lambda}.
Vec EmpiricalDualSubgradient(const RequestSample& sample, std::span<const double> b,
                             std::span<const double> lambda);

// m = 1 by an exact breakpoint scan (tie-break from cfg), m >= 2 by the
// bounded-variable simplex on the multi-knapsack LP.
DualSolution SolveEmpiricalDual(const RequestSample& sample, std::span<const double> b,
                                const SolverConfig& cfg = {}, const Vec* warm_start = nullptr);

// Offline optimum of max r'x s.t. A x <= b, x in [0, 1].
double HindsightValue(const RequestSample& sample, std::span<const double> b,
                      const SolverConfig& cfg = {});

// Fractional greedy by r/a; throws WrongDimension unless m = 1.
Allocation GreedyM1(const RequestSample& sample, double b);

// Complementary-slackness primal from a dual optimum. Items strictly above
// their price take 1, strictly below take 0, and items within 1e-7 (1 + r_max)
// of it share the leftover capacity. Throws RecoveryFailed when the value
// misses the dual value by more than 1e-6 (1 + |value|).
Allocation RecoverPrimal(const RequestSample& sample, std::span<const double> b,
                         std::span<const double> lambda);

// V(items[t..], b) == max_x r_t x + V(items[t+1..], b - a_t x) within 1e-6,
// with x on a 101-point grid refined by golden section.
bool ValueInductionCheck(const RequestSample& sample, std::span<const double> b,
                         size_t t_index);

}  // namespace olp

#endif  // OLP_HINDSIGHT_H_
