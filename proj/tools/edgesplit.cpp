#include <iostream>

#include "edgesplit/cli.hpp"

int main(int argc, char** argv) { return edgesplit::run_cli(argc, argv, std::cout, std::cerr); }
