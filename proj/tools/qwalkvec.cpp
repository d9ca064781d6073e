#include <iostream>
#include <string>
#include <vector>

#include "qwalkvec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qwalkvec::cli::run(std::move(args), std::cerr);
}
