#include <iostream>

#include "gsa/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gsa::cli::run(args, std::cout, std::cerr);
}
