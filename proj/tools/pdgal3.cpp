#include <iostream>

#include "pdgal3/cli.hpp"

int main(int argc, char** argv) { return pdgal3::cli::run(argc, argv, std::cout, std::cerr); }
