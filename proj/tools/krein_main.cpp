#include <iostream>
#include <string>
#include <vector>

#include "krein/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return krein::run_cli(args, std::cout, std::cerr);
}
