#include "p14/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return p14::cli::run(argc, argv, std::cout, std::cerr); }
