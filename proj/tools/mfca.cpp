#include <iostream>

#include <mfca/cli.hpp>

int main(int argc, char** argv)
{
    return mfca::run_command(argc, argv, std::cout, std::cerr);
}
