#pragma once

#include <iosfwd>

namespace deming::cli {

// Runs one command (fit, predict, bootstrap, simulate, coverage) and returns
// the process exit status. Errors are reported on `err` as a one-line JSON
// object {"error": {"kind": ..., "message": ...}}.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace deming::cli
