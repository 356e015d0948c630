#include <iostream>

#include "cournot/app/cli.hpp"

int main(int argc, char** argv) { return cournot::app::run_cli(argc, argv, std::cout, std::cerr); }
