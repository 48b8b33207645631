#pragma once

#include <iosfwd>
#include <string>
#include <utility>

namespace shallit::cli {

enum ExitCode : int { kOk = 0, kComputationError = 1, kUsageError = 2 };

/// `a..b` (inclusive) or a single integer. Throws std::invalid_argument.
std::pair<int, int> parse_range(const std::string& text);

/// Default --digits: $SHALLIT_DIGITS when set and valid, else 50.
int default_digits();

/// Runs the command line; results go to `out` (or --output), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shallit::cli
