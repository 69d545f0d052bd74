#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace r4bp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Runs the command line args (without the program name). Reports go to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// key=value lines to "--key value" tokens. Blank lines and '#' comments are skipped;
/// "key=true" becomes a bare flag and "key=false" is dropped.
std::vector<std::string> config_tokens(const std::string& text);

}  // namespace r4bp::cli
