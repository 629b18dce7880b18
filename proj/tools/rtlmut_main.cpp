#include <iostream>

#include "rtlmut/cli/cli.hpp"

int main(int argc, char** argv) {
  return rtlmut::cli::dispatch(argc, argv, std::cout, std::cerr);
}
