#include "tds/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return tds::cli::run(argc, argv, std::cout, std::cerr); }
