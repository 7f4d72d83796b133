#pragma once

#include <iosfwd>

namespace circlephase::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitUnsolved = 2;

/// Parses argv and runs one of the solve / verify / sample subcommands.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace circlephase::cli
