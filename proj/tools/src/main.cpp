#include <iostream>

#include "pulsesq/cli/commands.hpp"

int main(int argc, char** argv) { return pulsesq::cli::run_cli(argc, argv, std::cout, std::cerr); }
