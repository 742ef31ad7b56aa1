#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zerr::cli {

enum ExitCode : int {
  ok = 0,
  usage = 1,
  parse_error = 2,
  validation_error = 3,
  budget_exceeded = 4,
  impossible = 5,
  not_found = 6,
};

/// Runs one command line (program name excluded). Reports go to `out`;
/// diagnostics in human format go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zerr::cli
