#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dulab {

// Runs one command line (args exclude the program name). Returns the process
// exit code: 0 success, 1 usage error, 2 domain error, 3 internal error.
// Failures also write one JSON line {"code", "message"} to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dulab
