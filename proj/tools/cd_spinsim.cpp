#include <iostream>

#include "cdspin/cli.hpp"

int main(int argc, char** argv) { return cdspin::cli::run(argc, argv, std::cout, std::cerr); }
