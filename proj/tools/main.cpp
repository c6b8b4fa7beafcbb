#include <iostream>

#include "specanom/cli.hpp"

int main(int argc, char** argv) { return specanom::cli::main(argc, argv, std::cout, std::cerr); }
