#include "hysbm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hysbm::run_cli(argc, argv, std::cout, std::cerr); }
