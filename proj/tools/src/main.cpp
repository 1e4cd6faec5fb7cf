#include <iostream>

#include "matfact/cli/commands.hpp"

int main(int argc, char** argv) {
  return matfact::cli::run_cli(argc, argv, std::cout, std::cerr);
}
