#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace expfit::cli {

/// Run the command-line interface on the given arguments (without the
/// program name), writing reports to `out` and errors to `err`.
/// Returns 0 on success, 2 on input errors, 3 on numeric failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace expfit::cli
