#include <iostream>
#include <string>
#include <vector>

#include "rqrcp_tools/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rqrcp::tools::run_cli(args, std::cout, std::cerr);
}
