#include <iostream>
#include <string>
#include <vector>

#include "skillrank/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return skillrank::run_cli(args, std::cout, std::cerr);
}
