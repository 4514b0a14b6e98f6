#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sessbot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Runs one subcommand. `args` excludes the program name. Data goes to
// files or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace sessbot::cli
