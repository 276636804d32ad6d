#include <iostream>

#include "varstab/cli.hpp"

int main(int argc, char** argv) { return varstab::run_cli(argc, argv, std::cout, std::cerr); }
