#include <iostream>
#include <string>
#include <vector>

#include "hall_edge/cli/run.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return hall_edge::cli::run_cli(args, std::cout, std::cerr);
}
