#pragma once

#include <ostream>

namespace chainnet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the chainnet tool. Returns 0 on success, 1 when the input
/// data is invalid or malformed, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chainnet
