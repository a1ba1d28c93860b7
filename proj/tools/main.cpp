#include <iostream>
#include <string>
#include <vector>

#include "fracstep/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fracstep::run_command(args, std::cout, std::cerr);
}
