#pragma once

#include <iosfwd>

namespace twosided::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;       // bad flags, bad config, model errors
inline constexpr int kExitValidation = 2;  // validate found a tolerance breach

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twosided::cli
