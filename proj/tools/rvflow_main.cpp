#include <iostream>
#include <vector>

#include "rvflow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rvflow::cli::run(std::move(args), std::cout, std::cerr);
}
