#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tropescope::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInputError = 2,
  kEmptyCrawl = 3,
};

/// Runs one subcommand (scrape, import-legacy, stats, hist, diff, growth).
/// `args` excludes the program name. Reports go to `out`, diagnostics to
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tropescope::cli
