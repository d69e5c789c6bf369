#include <unistd.h>

#include <iostream>

#include "nwn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nwn::run_cli(args, std::cout, std::cerr, isatty(STDOUT_FILENO) != 0);
}
