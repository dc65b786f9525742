#include <iostream>

#include "deming/cli.hpp"

int main(int argc, char** argv) {
  return deming::cli::run(argc, argv, std::cout, std::cerr);
}
