#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  ratbounds::cli::configure_logging();
  std::vector<std::string> args(argv + 1, argv + argc);
  return ratbounds::cli::run(args, std::cout, std::cerr);
}
