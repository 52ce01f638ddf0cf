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

#ifndef OLP_QUADRATURE_H_
#define OLP_QUADRATURE_H_

#include <functional>
#include <span>
#include <vector>

namespace olp {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached and thread-safe after first use for a given n.
const GaussRule& GaussLegendre(int n);

// Integrates f over [lo, hi] split at the given interior breakpoints, using an
// n-point rule on every piece. Breakpoints outside (lo, hi) are ignored.
double IntegratePiecewise(const std::function<double(double)>& f, double lo,
                          double hi, std::span<const double> breakpoints,
                          int n = 8);

}  // namespace olp

#endif  // OLP_QUADRATURE_H_
