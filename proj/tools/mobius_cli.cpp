#include "mobius/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mobius::cli::main_entry(argc, argv, std::cout, std::cerr); }
