// Copyright 2026 The qnfauth Authors
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

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qnf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

/// Runs one subcommand. `args` excludes the program name. Exit status: 0 on
/// success (and on Accept for `authenticate`), 1 on Reject, 2 on usage,
/// config or input errors, 3 on any other failure.
int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qnf::cli
