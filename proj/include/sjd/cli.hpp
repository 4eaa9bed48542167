#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sjd::cli {

// Exit-status contract: 0 success, 1 usage/parse, 2 domain/invariant,
// 3 numerical (chart escape, branch, conditioning-as-error).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitNumerical = 3;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sjd::cli
