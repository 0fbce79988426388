#include <iostream>
#include <string>
#include <vector>

#include "bottomup/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return bottomup::cli::run_cli(args, std::cin, std::cout, std::cerr);
}
