#include <iostream>

#include "amiedot/cli.hpp"

int main(int argc, char** argv) { return amiedot::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
