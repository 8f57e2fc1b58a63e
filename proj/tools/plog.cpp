#include <iostream>

#include "plog/cli.hpp"

int main(int argc, char** argv) { return plog::cli::run(argc, argv, std::cout, std::cerr); }
