#include <iostream>

#include "acute/commands.hpp"

int main(int argc, char** argv) { return acute::run_cli(argc, argv, std::cout, std::cerr); }
