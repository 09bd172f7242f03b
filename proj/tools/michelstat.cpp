#include <iostream>

#include "michelstat/cli.hpp"

int main(int argc, char** argv) {
    return michelstat::run_cli(argc, argv, std::cout, std::cerr);
}
