#include <iostream>

#include "pcx/cli.hpp"

int main(int argc, char** argv) { return pcx::cli::run(argc, argv, std::cout, std::cerr); }
