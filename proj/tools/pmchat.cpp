#include <iostream>

#include "pmchat/cli.hpp"

int main(int argc, char** argv) { return pmchat::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
