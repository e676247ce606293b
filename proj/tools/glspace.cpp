#include <iostream>

#include "glspace/cli.hpp"

int main(int argc, char** argv) { return glspace::cli::main_entry(argc, argv, std::cout, std::cerr); }
