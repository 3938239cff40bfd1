#include <iostream>

#include "usng_cli/cli.hpp"

int main(int argc, char** argv) { return usng::cli::run_cli(argc, argv, std::cout, std::cerr); }
