#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sbc {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // verification / equivalence / runtime failure
  kExitUsage = 2,    // usage or parse error
};

// Entry point of the `sbc` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace sbc
