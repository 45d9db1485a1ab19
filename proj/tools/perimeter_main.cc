#include <iostream>

#include "perimeter/cli.h"

int main(int argc, char** argv) {
  return perimeter::cli::Main(argc, argv, std::cout, std::cerr);
}
