#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace transtab::cli {

// Exit codes returned by run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitManifest = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInternal = 4;

// Runs one command line (args excludes the program name). Tables go to `out`,
// warnings and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace transtab::cli
