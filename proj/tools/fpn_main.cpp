#include <iostream>

#include "fpn/cli/commands.hpp"

int main(int argc, char** argv) { return fpn::cli::run(argc, argv, std::cout, std::cerr); }
