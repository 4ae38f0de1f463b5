#include <iostream>
#include <string>
#include <vector>

#include "fraclie/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fraclie::run_cli(args, std::cout, std::cerr);
}
