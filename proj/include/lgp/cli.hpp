#pragma once

#include <string>
#include <vector>

namespace lgp {

/// Command-line front end. Exit codes: 0 success, 1 model error (for example a
/// nonexistence verdict), 2 malformed input or configuration.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace lgp
