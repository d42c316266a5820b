#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cps::cli {

enum ExitCode : int { kOk = 0, kNo = 1, kUsage = 2 };

/// Runs one `cps` command. Human-readable lines go to `out`, diagnostics to
/// `err`; files are written where the flags say.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cps::cli
