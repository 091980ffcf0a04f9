#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace circumfeas {

/// Entry point behind the `circumfeas` executable. Subcommands: solve,
/// bench, profile, gallery, angles. Returns 0 on success, 1 on
/// configuration errors and 2 on runtime failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace circumfeas
