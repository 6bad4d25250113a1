#include <iostream>
#include <string>
#include <vector>

#include "membrana_cli/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return membrana::cli::run(args, std::cout, std::cerr);
}
