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

#include "olp/linalg.h"

#include <algorithm>
#include <cmath>

namespace olp {

std::vector<std::vector<double>> NullSpace(const std::vector<std::vector<double>>& rows,
                                           int n, double tol) {
  std::vector<std::vector<double>> r = rows;
  std::vector<int> pivot_col;
  size_t rank = 0;
  for (int col = 0; col < n && rank < r.size(); ++col) {
    size_t best = rank;
    for (size_t i = rank + 1; i < r.size(); ++i) {
      if (std::abs(r[i][col]) > std::abs(r[best][col])) best = i;
    }
    double scale = 0.0;
    for (double v : r[best]) scale = std::max(scale, std::abs(v));
    if (std::abs(r[best][col]) <= tol * std::max(scale, 1.0)) continue;
    std::swap(r[best], r[rank]);
    const double inv = 1.0 / r[rank][col];
    for (double& v : r[rank]) v *= inv;
    for (size_t i = 0; i < r.size(); ++i) {
      if (i == rank) continue;
      const double f = r[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) r[i][j] -= f * r[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<std::vector<double>> basis;
  for (int free = 0; free < n; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
    std::vector<double> v(n, 0.0);
    v[free] = 1.0;
    for (size_t k = 0; k < rank; ++k) v[pivot_col[k]] = -r[k][free];
    // Gram-Schmidt against the vectors found so far.
    for (const auto& b : basis) {
      double c = 0.0;
      for (int j = 0; j < n; ++j) c += b[j] * v[j];
      for (int j = 0; j < n; ++j) v[j] -= c * b[j];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm <= tol) continue;
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace olp
