#include <iostream>

#include "trieig/cli/commands.hpp"

int main(int argc, char** argv) { return trieig::cli::run(argc, argv, std::cout, std::cerr); }
