// Copyright (c) 2026 The spkpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPKPRIV_CLI_H_
#define SPKPRIV_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace spkpriv::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitIo = 3,
  kExitPrecondition = 4,
};

// Entry point of spkpriv-eval. `args` excludes the program name. Messages go
// to `out` and diagnostics to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spkpriv::cli

#endif  // SPKPRIV_CLI_H_
