#pragma once

#include <string>
#include <vector>

namespace bridgeirt {

// Command-line front end. args holds the arguments in natural order without
// the program name. Returns the process exit code:
//   0  success
//   1  diagnostic failure (convergence threshold exceeded, flat chain)
//   2  usage or data error
//   3  numeric failure inside the sampler or a summary computation
int run_cli(const std::vector<std::string>& args);

}  // namespace bridgeirt
