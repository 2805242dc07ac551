#include <iostream>
#include <string>
#include <vector>

#include "autoconv/cli.hpp"

int main(int argc, char** argv) {
  return autoconv::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
