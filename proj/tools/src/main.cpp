#include <iostream>

#include "cmech_tools/cli.hpp"

int main(int argc, char** argv) { return cmech::cli::run(argc, argv, std::cout, std::cerr); }
