#include <iostream>

#include "pseudotest/cli.hpp"

int main(int argc, char** argv) { return pseudotest::run_cli(argc, argv, std::cout, std::cerr); }
