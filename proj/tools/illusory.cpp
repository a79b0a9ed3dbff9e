#include <iostream>

#include "illusory/cli.hpp"

int main(int argc, char** argv) {
  return illusory::cli::main_with_args(argc, argv, std::cout, std::cerr);
}
