#include <iostream>

#include <mlsm/cli.hpp>

int main(int argc, char** argv) {
    return mlsm::run_cli(argc, argv, std::cout, std::cerr);
}
