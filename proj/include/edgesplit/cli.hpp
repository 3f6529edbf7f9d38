#pragma once

#include <iosfwd>

namespace edgesplit {

/// Command-line entry point. Exit status: 0 success, 1 validation failure
/// (bad arguments, documents or configuration), 2 runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edgesplit
