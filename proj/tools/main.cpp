#include <iostream>

#include "icsel/cli.hpp"

int main(int argc, char** argv) { return icsel::cli::run(argc, argv, std::cout, std::cerr); }
