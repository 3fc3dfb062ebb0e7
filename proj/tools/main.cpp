#include <iostream>
#include <string>
#include <vector>

#include "bnenum/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv, argv + argc);
  const int code = bnenum::run_cli(args, std::cout, std::cerr);
  std::cout.flush();
  return code;
}
