#include <iostream>

#include "jsr/cli.hpp"

int main(int argc, char** argv) { return jsr::run_cli(argc, argv, std::cout, std::cerr); }
