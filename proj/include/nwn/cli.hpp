#pragma once

// Command-line front end: validate, simulate, translate, cover, gen and
// crosscheck.

#include <iosfwd>
#include <string>
#include <vector>

namespace nwn {

enum ExitCode : int { kExitOk = 0, kExitNegative = 1, kExitInconclusive = 2, kExitUsage = 3 };

// args excludes the program name. Styling is applied only when styled is set
// and NWN_COLOR is not "0". Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool styled = false);

}  // namespace nwn
