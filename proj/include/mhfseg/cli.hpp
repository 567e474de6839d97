#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mhfseg::cli {

enum ExitCode : int { kOk = 0, kIoFailure = 1, kUsage = 2 };

/// Entry point of the `mhfseg` tool. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mhfseg::cli
