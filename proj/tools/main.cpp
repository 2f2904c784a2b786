#include <iostream>

#include "quadconc/cli.hpp"

int main(int argc, char** argv) {
  return quadconc::dispatch(argc, argv, std::cout, std::cerr);
}
