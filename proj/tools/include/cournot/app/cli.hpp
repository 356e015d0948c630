#pragma once

#include <ostream>

namespace cournot::app {

/// Runs the `cournot` command line. Records go to `out`, diagnostics to
/// `err`. Returns 0 on success, 1 on a model/config failure, 2 on bad usage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cournot::app
