#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sgg::cli {

inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kDomain = 2;
inline constexpr int kUsage = 64;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgg::cli
