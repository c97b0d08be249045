#include <iostream>

#include "pdm/cli.hpp"

int main(int argc, char** argv) { return pdm::cli::main_entry(argc, argv, std::cout, std::cerr); }
