#include <iostream>

#include "hoprank/cli.hpp"

int main(int argc, char** argv) {
  return hoprank::run(argc, argv, std::cout, std::cerr);
}
