#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zslice::cli {

inline constexpr const char* kSchema = "zslice.result/1";

enum ExitCode : int { kOk = 0, kNumericalFailure = 1, kInvalidInput = 2 };

/// Runs the command line `args` (without the program name). Results go to
/// the --out file, or to `out` when no file is given; diagnostics go to `err`.
/// Nothing is written to --out unless the command completes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zslice::cli
