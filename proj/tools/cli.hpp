#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ethrisk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

// Entry point of the `ethrisk` tool: run, batch, metrics, validate.
int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ethrisk::cli
