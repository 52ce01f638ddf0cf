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

// Reference computations that share no code with the library. They are slow
// and simple on purpose.

#ifndef OLP_TESTS_ORACLES_H_
#define OLP_TESTS_ORACLES_H_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

struct Item {
  Vec a;
  double r = 0.0;
  double w = 1.0;  // multiplicity, p_j for discrete laws
};

// w'(r - a'lambda)^+ summed, plus b'lambda.
double DualObjective(const std::vector<Item>& items, const Vec& b, const Vec& lambda);

// Optimal value of max sum w r x s.t. sum w a x <= b, x in [0, 1] for m = 1:
// take items by decreasing r / a, free items (a = 0) whenever r > 0.
double FractionalGreedy(const std::vector<Item>& items, double b);

// Minimum of the dual over [0, upper]^m by enumerating every vertex of the
// hyperplane arrangement {r_j = a_j'lambda} plus box faces. Exact for m <= 3.
struct VertexResult {
  double value = 0.0;
  Vec lambda;
};
VertexResult VertexEnumeration(const std::vector<Item>& items, const Vec& b, const Vec& upper);

// Coarse-to-fine grid search of the m = 2 dual over [0, upper]^2.
double GridMinimum2(const std::vector<Item>& items, const Vec& b, const Vec& upper,
                    int points = 81, int refinements = 30);

// Grid of n points then golden-section refinement of the best bracket.
double GridArgmin1(const std::function<double(double)>& f, double lo, double hi, int n = 4001);

// Composite Simpson rule with n (even) panels.
double Simpson(const std::function<double(double)>& f, double lo, double hi, int n = 20000);

// Independent random instance with a_ij ~ U[a_lo, a_hi], r ~ U[0, 1] and
// b_i = fill * sum_j a_ij.
struct Instance {
  std::vector<Item> items;
  Vec b;
};
Instance RandomInstance(std::mt19937_64& gen, int m, int n, double a_lo = 0.2,
                        double a_hi = 1.0, double fill = 0.4);

}  // namespace oracle

#endif  // OLP_TESTS_ORACLES_H_
