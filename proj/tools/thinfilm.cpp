#include <iostream>

#include "thinfilm/cli.hpp"

int main(int argc, char** argv)
{
    return thinfilm::run_cli(argc, argv, std::cout, std::cerr);
}
