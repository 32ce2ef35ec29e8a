#include <iostream>

#include "dabr_cli.hpp"

int main(int argc, char** argv) { return dabr::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
