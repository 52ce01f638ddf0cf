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

#ifndef OLP_TOOLS_CLI_H_
#define OLP_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "olp/errors.h"

namespace olp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitSolver = 2;

// Solver-side failures exit 2; everything traceable to the input exits 1.
int ExitCodeFor(ErrorCode code);

// args excludes the program name. Subcommands: sweep, fluid, degeneracy,
// probe, plot.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace olp::cli

#endif  // OLP_TOOLS_CLI_H_
