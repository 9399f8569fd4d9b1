#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace monolab::app {

/// Entry point of the `monolab` tool. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace monolab::app
