#include "detlat/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return detlat::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
