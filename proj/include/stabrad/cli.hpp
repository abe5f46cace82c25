#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stabrad {

/// Entry point of the `stabrad` tool; `args` excludes the program name.
/// Returns the process exit code (0, 2 input, 3 violation, 4 non-convergence).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stabrad
