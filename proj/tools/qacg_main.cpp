#include <iostream>
#include <string>
#include <vector>

#include "qacg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qacg::run_command(args, std::cout, std::cerr);
}
