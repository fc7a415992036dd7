// Copyright 2026 The TOTP3 Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOTP3_TOOLS_LOG_H_
#define TOTP3_TOOLS_LOG_H_

#include <string_view>

namespace totp3 {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

// Reads TOTP3_LOG (error, info or debug); info when unset or unrecognized.
LogLevel LogLevelFromEnv();

void SetLogLevel(LogLevel level);

// Writes "[level] message" to stderr if `level` is enabled.
void Log(LogLevel level, std::string_view message);

}  // namespace totp3

#endif  // TOTP3_TOOLS_LOG_H_
