#include <iostream>

#include "warpdecomp/cli.hpp"

int main(int argc, char** argv) { return wpd::cli::run(argc, argv, std::cout, std::cerr); }
