#include <iostream>

#include "totient/cli.hpp"

int main(int argc, char** argv) { return totient::cli::run(argc, argv, std::cout, std::cerr); }
