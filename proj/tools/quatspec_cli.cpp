#include <iostream>

#include "quatspec/cli.hpp"

int main(int argc, char** argv) { return quatspec::cli::run(argc, argv, std::cout, std::cerr); }
