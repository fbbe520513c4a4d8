#ifndef BROKENSTICK_TOOLS_CLI_H_
#define BROKENSTICK_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace brokenstick::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;  // also validation and I/O errors
inline constexpr int kToleranceBreach = 2;

// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace brokenstick::cli

#endif  // BROKENSTICK_TOOLS_CLI_H_
