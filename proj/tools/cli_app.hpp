#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lorenz::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

/// Runs the `lorenz-el` command line. `argv[0]` is the program name. Output
/// files default to `out`; diagnostics and progress go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "0.1,0.5,0.9" or "start..end[:step]" (step defaults to 0.1). Range values
/// are rounded to 12 decimals. Throws DomainError on malformed text.
std::vector<double> parse_t_list(const std::string& text);

}  // namespace lorenz::cli
