#include <iostream>
#include <string>
#include <vector>

#include "l2split/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return l2split::cli::run(args, std::cout, std::cerr);
}
