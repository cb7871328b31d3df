#include <iostream>

#include "lgf/cli.hpp"

int main(int argc, char** argv) { return lgf::cli_main(argc, argv, std::cout, std::cerr); }
