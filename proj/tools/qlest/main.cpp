#include <iostream>

#include "qlest/cli.hpp"

int main(int argc, char** argv) { return qlest::cli::dispatch(argc, argv, std::cout, std::cerr); }
