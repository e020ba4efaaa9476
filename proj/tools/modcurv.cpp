#include "modcurv/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return modcurv::run_cli(argc, argv, std::cout, std::cerr); }
