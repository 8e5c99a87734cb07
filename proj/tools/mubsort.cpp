#include <iostream>

#include "mubsort/cli/commands.hpp"

int main(int argc, char** argv) { return mubsort::cli::run_cli(argc, argv, std::cout, std::cerr); }
