#include <iostream>

#include "sparsedirect/cli.hpp"

int main(int argc, char** argv)
{
    return sparsedirect::run_cli(argc, argv, std::cout, std::cerr);
}
