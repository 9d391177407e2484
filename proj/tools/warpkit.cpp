#include <iostream>
#include <string>
#include <vector>

#include "warpkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return warpkit::cli::dispatch(args, std::cout, std::cerr);
}
