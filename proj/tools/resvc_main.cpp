#include <iostream>

#include "resvc/cli.hpp"

int main(int argc, char** argv) { return resvc::cli_main(argc, argv, std::cout, std::cerr); }
