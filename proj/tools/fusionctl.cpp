#include "fusion/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return fusion::cli::run(argc, argv, std::cout, std::cerr);
}
