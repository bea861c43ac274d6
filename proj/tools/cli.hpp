#pragma once

#include <iosfwd>

namespace selfsim::cli {

/// Runs one subcommand. Reports go to `out`; errors are written to `err` as
/// {"error": kind, "message": text} and give a nonzero exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace selfsim::cli
