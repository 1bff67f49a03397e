#include <iostream>

#include "logicbench/cli.hpp"

int main(int argc, char** argv) {
  return logicbench::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
