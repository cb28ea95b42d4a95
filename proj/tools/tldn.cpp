#include <iostream>

#include "tldn/commands.hpp"

int main(int argc, char** argv) { return tldn::cli::run(argc, argv, std::cout, std::cerr); }
