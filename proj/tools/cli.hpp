#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stateprio::cli {

// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1; // reachable / circularity / bound exhausted
inline constexpr int kFailure = 2;  // usage, IO, parse or solver errors

/// Runs one command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace stateprio::cli
