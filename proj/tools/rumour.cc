#include <iostream>
#include <string>
#include <vector>

#include "rumour/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rumour::Run(args, std::cout, std::cerr);
}
