#include <iostream>
#include <string>
#include <vector>

#include "stein_chisq/tools/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stein_chisq::tools::run_command(args, std::cout, std::cerr);
}
