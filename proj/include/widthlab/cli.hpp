#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace widthlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitResource = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitNoInput = 66;

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::uint64_t fnv1a(std::string_view data);

/// "a..b" or "n".
std::vector<unsigned> parse_levels(std::string_view text);
/// "a:b:step", "x,y,z" or "x"; grid points rounded to 1e-12.
std::vector<double> parse_grid(std::string_view text);

std::string version();

}  // namespace widthlab::cli
