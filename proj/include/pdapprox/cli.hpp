#pragma once

#include <iosfwd>

namespace pdapprox {

/// Entry point of the `pdapprox` command line tool. Returns the process exit
/// code: 0 success, 1 invalid input or configuration, 2 failed criterion in
/// `check`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pdapprox
