// Copyright 2026 The Hatex Authors.
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

#ifndef HATEX_TOOLS_COMMANDS_H_
#define HATEX_TOOLS_COMMANDS_H_

#include <string>
#include <vector>

namespace hatex::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "HATEX_OUTPUT_DIR";

// Exit status: 0 success, 1 runtime failure, 2 usage or configuration error.
int RunCli(int argc, const char* const* argv);

}  // namespace hatex::cli

#endif  // HATEX_TOOLS_COMMANDS_H_
