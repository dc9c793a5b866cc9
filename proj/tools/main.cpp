#include <iostream>

#include "pdapprox/cli.hpp"

int main(int argc, char** argv) { return pdapprox::run_cli(argc, argv, std::cout, std::cerr); }
