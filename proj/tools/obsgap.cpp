#include <iostream>

#include "obsgap/cli.hpp"

int main(int argc, char** argv) { return obsgap::cli::run(argc, argv, std::cout, std::cerr); }
