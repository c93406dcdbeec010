#include <iostream>

#include "sbc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sbc::run_cli(args, std::cout, std::cerr, std::cin);
}
