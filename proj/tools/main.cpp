#include <iostream>

#include "twofold/cli.hpp"

int main(int argc, char** argv) {
  return twofold::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
