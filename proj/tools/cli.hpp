#pragma once

// Subcommand dispatch for the rmdisk tool.
//
// Exit codes: 0 success, 1 unexpected failure, 2 usage or configuration error,
// 3 numerical failure, 4 near-resonance in a normal-form solve.

#include <ostream>
#include <string>
#include <vector>

namespace rmdisk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitResonance = 4;

// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string usage();

}  // namespace rmdisk::cli
