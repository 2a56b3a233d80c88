#include <iostream>

#include "hyperfact/cli.hpp"

int main(int argc, char** argv) { return hyperfact::run_cli(argc, argv, std::cout, std::cerr); }
