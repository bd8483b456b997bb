#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace partsub::cli {

// Parses and runs one command-line invocation (args exclude the program
// name). Output goes to `out`, diagnostics to `err`. Returns the process
// exit code: 0 success / all checks passed, 1 verification failure,
// 2 configuration error, 3 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace partsub::cli
