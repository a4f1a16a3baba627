#include <iostream>

#include "blackwell/cli.hpp"

int main(int argc, char** argv) { return blackwell::run_command(argc, argv, std::cout, std::cerr); }
