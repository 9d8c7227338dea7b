#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isothermic::cli {

// Exit codes: 0 success, 1 verification failure, 2 usage or data error.
constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsageError = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isothermic::cli
