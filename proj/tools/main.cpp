#include <iostream>

#include "sgw/cli.hpp"

int main(int argc, char** argv) { return sgw::cli::run(argc, argv, std::cout, std::cerr); }
