#include <iostream>

#include "mcwave/cli.hpp"

int main(int argc, char** argv) { return mcw::cli::run(argc, argv, std::cout, std::cerr); }
