#include <iostream>

#include "r4bp_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return r4bp::cli::run(args, std::cout, std::cerr);
}
