#include <iostream>

#include "capra/cli.hpp"

int main(int argc, char** argv) { return capra::cli::main(argc, argv, std::cout, std::cerr); }
