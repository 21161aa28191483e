#include <iostream>

#include "dencomb/cli.hpp"

int main(int argc, char** argv) {
  return dencomb::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
