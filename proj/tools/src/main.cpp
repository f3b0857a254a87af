#include <iostream>

#include "ivdae/cli/commands.hpp"

int main(int argc, char** argv) { return ivdae::cli::run_cli(argc, argv, std::cout, std::cerr); }
