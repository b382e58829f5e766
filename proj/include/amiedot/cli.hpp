#pragma once

#include <iosfwd>

namespace amiedot {

/// Entry point of the `amiedot` tool. Exit codes: 0 success, 1 validation or
/// usage error, 2 I/O error (including a corrupt log).
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace amiedot
