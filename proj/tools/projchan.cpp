#include <iostream>
#include <string>
#include <vector>

#include "projchan/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return projchan::cli::run(args, std::cout, std::cerr);
}
