#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  return skewdirac::cli::run(argc, argv, {std::cout, std::cerr});
}
