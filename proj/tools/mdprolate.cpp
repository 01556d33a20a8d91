#include <iostream>

#include "mdprolate/commands.hpp"

int main(int argc, char** argv) { return mdprolate::run_cli(argc, argv, std::cout, std::cerr); }
