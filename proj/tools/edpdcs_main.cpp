#include <iostream>

#include "edpdcs/cli.hpp"

int main(int argc, char** argv) {
  return edpdcs::run_cli(argc, argv, std::cout, std::cerr);
}
