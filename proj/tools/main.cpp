#include "cklms/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cklms::cli_main(argc, argv, std::cout, std::cerr); }
