// Copyright 2026 The ludeq Authors
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


#ifndef LUDEQ_TOOLS_CLI_H_
#define LUDEQ_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace ludeq::cli {

// Exit codes shared by every command.
inline constexpr int kOk = 0;         // success, equivalent
inline constexpr int kNegative = 1;   // not equivalent, violations found
inline constexpr int kInputError = 2; // usage or input error

struct Environment {
  bool stdout_is_tty = false;
  bool no_color = false;  // NO_COLOR set
};

// Runs one invocation; args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = {});

}  // namespace ludeq::cli

#endif  // LUDEQ_TOOLS_CLI_H_
