#include <iostream>

#include "eightv/cli.hpp"

int main(int argc, char** argv) { return eightv::cli::run(argc, argv, std::cout, std::cerr); }
