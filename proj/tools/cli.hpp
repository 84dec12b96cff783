#pragma once

#include <string>
#include <vector>

namespace hyperdm::cli {

// Parse and execute one toolkit invocation (subcommand plus flags, without
// the program name). Returns the process exit status. Every successful run
// writes its outputs plus a manifest.json into the chosen output directory.
int run_command(const std::vector<std::string>& args);

}  // namespace hyperdm::cli
