#include <iostream>
#include <string>
#include <vector>

#include "coreinv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return coreinv::cli::run(args, std::cout, std::cerr);
}
