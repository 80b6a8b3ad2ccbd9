#include <iostream>
#include <string>
#include <vector>

#include "irfk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return irfk::run_cli(args, std::cout, std::cerr);
}
