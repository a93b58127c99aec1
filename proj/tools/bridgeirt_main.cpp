#include <string>
#include <vector>

#include "bridgeirt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bridgeirt::run_cli(args);
}
