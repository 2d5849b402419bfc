#pragma once

#include <iosfwd>

namespace otbyz::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalidSpec = 2;
inline constexpr int kIoError = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace otbyz::cli
