// Copyright 2026 The Matchforge Authors
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

#ifndef MATCHFORGE_TOOLS_CLI_HPP_
#define MATCHFORGE_TOOLS_CLI_HPP_

#include <iosfwd>

namespace matchforge::cli {

// Runs one invocation of the command-line tool.
// Exit codes: 0 success, 1 usage or input error, 2 infeasible problem,
// 3 solver or internal failure.
int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace matchforge::cli

#endif  // MATCHFORGE_TOOLS_CLI_HPP_
