#include <iostream>

#include "cli_harness.hpp"

int main(int argc, char** argv) { return g2::cli::main_entry(argc, argv, std::cout, std::cerr); }
