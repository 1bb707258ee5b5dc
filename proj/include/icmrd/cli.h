// Copyright 2026 The icmrd Authors. All Rights Reserved.
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

#ifndef ICMRD_CLI_H_
#define ICMRD_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace icmrd {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // a verification did not pass
inline constexpr int kExitInput = 2;   // bad flags, files or values

// Runs one command line. args[0] is the program name. Results go to `out`,
// diagnostics and usage text to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace icmrd

#endif  // ICMRD_CLI_H_
