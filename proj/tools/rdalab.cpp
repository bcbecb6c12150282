#include <iostream>

#include "rdalab/cli.hpp"

int main(int argc, char** argv) { return rda::cli::run(argc, argv, std::cout, std::cerr); }
