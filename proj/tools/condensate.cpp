#include <iostream>

#include "condensate/cli.hpp"

int main(int argc, char** argv) { return condensate::cli::run(argc, argv, std::cout, std::cerr); }
