#pragma once

#include <iosfwd>

namespace trieig::cli {

/// Exit codes: success, usage / I/O / validation error, failed verification.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitVerifyFailed = 3 };

/// Parses argv (argv[0] is the program name) and runs one subcommand:
/// gen, eig, cond, growth, perturb or verify. Reports go to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trieig::cli
