// Copyright 2026 The CFSK Receiver Authors
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

namespace cfsk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

inline constexpr unsigned long long kDefaultSeed = 20180101ull;
/// Overrides the default worker count when --threads is not given.
inline constexpr const char* kThreadsEnv = "CFSK_THREADS";

/// Runs the command-line front end. `args` excludes the program name. CSV or
/// document output goes to `out` unless --out names a file; diagnostics go to
/// `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfsk
