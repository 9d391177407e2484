#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace warpkit::cli {

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 on usage errors, 2 on data errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace warpkit::cli
