#include <iostream>

#include "ffc/cli.hpp"

int main(int argc, char** argv) { return ffc::run_cli(argc, argv, std::cout, std::cerr); }
