#pragma once

#include <iosfwd>

namespace hysbm {

// Command-line front end. Returns the process exit status: 0 success,
// 2 input or validation error, 3 numerical abort, 1 anything else.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hysbm
