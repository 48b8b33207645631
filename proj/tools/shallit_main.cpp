#include <iostream>

#include "shallit/cli.hpp"

int main(int argc, char** argv) { return shallit::cli::run(argc, argv, std::cout, std::cerr); }
