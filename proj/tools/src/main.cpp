#include <iostream>

#include "sshmt_cli/cli.hpp"

int main(int argc, char** argv) { return sshmt::cli::run(argc, argv, std::cout, std::cerr); }
