#include <iostream>
#include <string>
#include <vector>

#include "caponplus/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return caponplus::run_cli(args, std::cout, std::cerr);
}
