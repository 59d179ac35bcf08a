#include <iostream>

#include "gyrochip/cli/commands.hpp"

int main(int argc, char** argv) { return gyrochip::cli::run_cli(argc, argv, std::cout, std::cerr); }
