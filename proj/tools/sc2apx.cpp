#include <iostream>
#include <string>
#include <vector>

#include "sc2apx/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sc2apx::run_command(args, std::cout, std::cerr);
}
