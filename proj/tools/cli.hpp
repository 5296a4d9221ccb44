#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "localitylab/settings.hpp"

namespace localitylab::cli {

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out` or to --out; warnings and the one-line error object go to `err`.
/// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "X,Y,Z" or numeric triples "0,0,1;1,0,0". Directions are rescaled onto
/// the sphere, with a warning on `err` if that moved them by more than 1e-6.
/// Throws UsageError on malformed input.
Settings parse_settings(const std::string& text, std::ostream& err);

}  // namespace localitylab::cli
