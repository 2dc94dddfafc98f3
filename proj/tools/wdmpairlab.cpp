#include <iostream>
#include <string>
#include <vector>

#include "wdmpair/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wdmpair::run_command(args, std::cout, std::cerr);
}
