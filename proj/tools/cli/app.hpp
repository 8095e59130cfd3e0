#pragma once

#include <iosfwd>

namespace qmon::cli {

/// Parses arguments, dispatches the subcommand and maps failures to exit
/// codes: 0 success, 2 configuration error, 3 data error, 4 numerical error.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace qmon::cli
