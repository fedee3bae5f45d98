#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddecoh::cli {

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out`, diagnostics to `err`. Returns the process exit code: 0 success,
/// 2 configuration error, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ddecoh::cli
