#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polyint {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNumeric = 3 };

/// Runs one command line (args without the program name). Results go to
/// `out` unless --out names a file; diagnostics go to `err`.
///
/// Subcommands: eval-section, detect, multipliers, verify-identity,
/// kubota, steiner. Output is a pure function of the flags and the body
/// file, printed with 17 significant digits.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyint
