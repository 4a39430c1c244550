// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_CLI_HPP
#define GRAPHTV_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace graphtv {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidArgument = 2,
  kExitNumericalFailure = 3,
};

/// Entry point of the graphtv tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphtv

#endif  // GRAPHTV_CLI_HPP
