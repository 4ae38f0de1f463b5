#ifndef FRACLIE_COMMANDS_HPP
#define FRACLIE_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "fraclie/errors.hpp"

namespace fraclie {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 2;
inline constexpr int kExitInput = 3;

/// Exit code for a library error: 2 for failed verifications, 3 for bad
/// input or parameters outside a domain.
int exit_code_for(const Error& e);

/// Runs one CLI invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fraclie

#endif
