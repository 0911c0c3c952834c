#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rosen {

// Command-line entry point. Subcommands: simulate, cumulants,
// verify {ito-x2, relation, pathwise-ito}, ou, spde, estimate.
// Returns 0 on success, 1 when a numerical tolerance check fails and 2 on
// usage errors. Reports go to `out` unless --output names a file.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rosen
