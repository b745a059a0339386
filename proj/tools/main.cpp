#include "cli_app.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return basket::cli::run_cli(args, std::cout, std::cerr);
}
