#include <iostream>

#include "dynoracle/cli.hpp"

int main(int argc, char** argv) {
  return dynoracle::cli::run(argc, argv, std::cout, std::cerr);
}
