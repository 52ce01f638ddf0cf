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

#ifndef OLP_LINALG_H_
#define OLP_LINALG_H_

#include <vector>

namespace olp {

// Orthonormal basis of {x in R^n : row' x = 0 for every row}.
std::vector<std::vector<double>> NullSpace(const std::vector<std::vector<double>>& rows,
                                           int n, double tol = 1e-10);

}  // namespace olp

#endif  // OLP_LINALG_H_
