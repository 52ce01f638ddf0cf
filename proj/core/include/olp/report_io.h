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

#ifndef OLP_REPORT_IO_H_
#define OLP_REPORT_IO_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "olp/harness.h"

namespace olp {

// Header policy,T,trial,regret,seed.
void WriteRegretCsv(std::ostream& out, const std::vector<RegretRow>& rows);
std::vector<RegretRow> ReadRegretCsv(std::istream& in);

// Log-log plot of mean regret per (policy, T) with each policy's fitted line.
std::string RenderRegretSvg(const std::vector<CellSummary>& cells,
                            const std::map<std::string, ScalingFit>& fits);

}  // namespace olp

#endif  // OLP_REPORT_IO_H_
