#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace freedim::cli {

/// Runs the fdim command line. `args` excludes the program name. Returns
/// the process exit status: 0 ok, 1 parse or usage error, 2 no rule
/// applies, 3 non-convergence, 4 config schema violation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freedim::cli
