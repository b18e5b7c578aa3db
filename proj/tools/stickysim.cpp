#include <iostream>

#include "sticky/cli.hpp"

int main(int argc, char** argv) { return sticky::run_cli(argc, argv, std::cout, std::cerr); }
