#include <iostream>

#include "twosided_cli/cli.hpp"

int main(int argc, char** argv) { return twosided::cli::run(argc, argv, std::cout, std::cerr); }
