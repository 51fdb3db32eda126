#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace twofold::cli {

inline constexpr int kSchemaVersion = 1;

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kInvalid = 2;
inline constexpr int kBudget = 3;

std::string usage();

/// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twofold::cli
