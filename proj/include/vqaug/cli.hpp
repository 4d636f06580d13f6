// Copyright 2026 The vqaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vqaug/error.hpp"

namespace vqaug::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitContent = 1;  // validation or content failure
inline constexpr int kExitFormat = 2;   // format or version refusal
inline constexpr int kExitUsage = 64;

int ExitCodeFor(ErrorCode code);

// Runs the `vqaug` command line. `args` excludes the program name. Reports
// and data go to `out`; progress and diagnostics go to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vqaug::cli
