#include <iostream>
#include <string>
#include <vector>

#include "covertq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return covertq::cli::run(args, std::cout, std::cerr);
}
