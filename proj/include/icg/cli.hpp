// Command-line front end. Exit codes: 0 ISAP established, 1 counterexample,
// 2 unknown, 3 usage or arithmetic error.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace icg::cli {

inline constexpr int kExitEstablished = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 3;

/// Environment variable holding the default brute-force cap.
inline constexpr const char* kCapEnvVar = "ICG_BRUTE_CAP";

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace icg::cli
