#include "bilinfrac/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bilinfrac::run_cli(argc, argv, std::cout, std::cerr); }
