#include <iostream>
#include <string>
#include <vector>

#include "tpg/cli_app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tpg::cli::run(args, std::cout, std::cerr);
}
