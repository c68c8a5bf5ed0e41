#include <iostream>
#include <string>
#include <vector>

#include "period_balance/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return period_balance::run_cli(args, std::cout, std::cerr, std::cin);
}
