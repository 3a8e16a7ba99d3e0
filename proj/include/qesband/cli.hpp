#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qesband::cli {

/// Exit codes of the qesband tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomain = 2,
  kConsistency = 3,
  kIo = 4,
};

/// Parses a as a non-negative integer or half-integer ("1.5", "3/2"),
/// returning 2a. DomainError otherwise.
int parse_twice_a(const std::string& text);

/// 17 significant digits, shortest-free fixed format ("%.17g").
std::string format_real(double v);

/// Runs the tool. args excludes the program name. Data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qesband::cli
