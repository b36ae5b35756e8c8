#include <iostream>
#include <string>
#include <vector>

#include "topk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return topk::cli_main(args, std::cout, std::cerr);
}
