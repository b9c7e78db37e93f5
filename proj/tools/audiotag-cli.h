// tools/audiotag-cli.h

// Copyright 2026  audiotag authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef AUDIOTAG_TOOLS_AUDIOTAG_CLI_H_
#define AUDIOTAG_TOOLS_AUDIOTAG_CLI_H_

#include <iostream>
#include <string>
#include <vector>

namespace audiotag {

// Entry point of the `audiotag` tool.  `args` excludes the program name.
// Returns the process exit code: 0 success, 1 usage, 2 config, 3 data,
// 4 numeric.  Results written to "-" go to `out`; messages go to `err`.
int RunCli(const std::vector<std::string> &args, std::ostream &out = std::cout,
           std::ostream &err = std::cerr);

}  // namespace audiotag

#endif  // AUDIOTAG_TOOLS_AUDIOTAG_CLI_H_
