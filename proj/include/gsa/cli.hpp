#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gsa::cli {

/// Runs one gsatk command.  `args` excludes the program name.  Returns the
/// process exit code: 0 ok, 2 user or configuration error, 3 model error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gsa::cli
