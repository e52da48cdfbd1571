#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stein_chisq::tools {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;  // a bound was violated numerically
inline constexpr int kExitInvalid = 2;    // bad flags or inputs
inline constexpr int kExitNumerical = 3;  // a computation failed (quadrature, non-finite value)

/// Comma list ("0.2,0.3,0.5") or "uniform:m". Throws InvalidArgument unless
/// the entries are positive and sum to 1 within 1e-12.
std::vector<double> parse_probabilities(const std::string& text);

/// Runs `stein-chisq <args...>` (args excludes the program name). Reports go to
/// `out` (or --out PATH), diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stein_chisq::tools
