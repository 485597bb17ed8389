#include <iostream>

#include "topkit/cli.h"

int main(int argc, char** argv) {
  return topkit::RunCli(argc, argv, std::cout, std::cerr);
}
