#include <iostream>

#include "polyeb/cli.hpp"

int main(int argc, char** argv) { return polyeb::cli::dispatch(argc, argv, std::cout, std::cerr); }
