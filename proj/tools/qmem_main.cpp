#include <iostream>

#include "qmem/cli.hpp"

int main(int argc, char** argv) { return qmem::run_cli(argc, argv, std::cout, std::cerr); }
