#include <iostream>

#include "gazescale/cli.hpp"

int main(int argc, char** argv) { return gazescale::cli_main(argc, argv, std::cout, std::cerr); }
