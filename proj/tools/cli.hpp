#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netmp::cli {

enum ExitCode : int { ok = 0, failure = 1, usage = 2, unconverged = 3 };

/// Runs one command line (without the program name). Results go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netmp::cli
