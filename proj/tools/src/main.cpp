#include <iostream>
#include <string>
#include <vector>

#include "polarmwd_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return polarmwd::cli::run(args, std::cout, std::cerr);
}
