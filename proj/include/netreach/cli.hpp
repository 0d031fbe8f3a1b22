#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netreach::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitUsage = 64;

/// Entry point of the `netreach` tool. `args` excludes the program name.
/// Report documents go to `out` (or the --out path); human-readable
/// summaries and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace netreach::cli
