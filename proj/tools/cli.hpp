#pragma once

// Subcommands of the gimag command-line tool. Each returns the process exit
// code and writes human output (or the JSON report with --json) to out and
// diagnostics to err.

#include <iosfwd>
#include <string>
#include <vector>

namespace gimag::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalid = 2,
  kQbmFailure = 3,
  kCounterexample = 4,
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace gimag::cli
