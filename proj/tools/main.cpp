#include <iostream>

#include "secrecy/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return secrecy::cli::run(args, std::cout, std::cerr);
}
