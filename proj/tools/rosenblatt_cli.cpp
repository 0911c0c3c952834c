#include "rosenblatt/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rosen::run_cli(argc, argv, std::cout, std::cerr); }
