#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relaycast::cli {

/// Runs the command line (program name excluded). Returns the exit code:
/// 0 on success, 1 on solver errors, 2 on usage errors. Errors are written
/// to `err` as a single line `error: <code>: <detail>`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace relaycast::cli
