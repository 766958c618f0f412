#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace routed::cli {

enum ExitCode : int { kCertified = 0, kPass = 0, kNotCertified = 1, kFail = 1, kInputError = 2 };

// Runs the routed_bell front end on args (without the program name).
// Machine-readable output goes to out, human-readable messages to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace routed::cli
