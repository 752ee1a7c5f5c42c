#include "sechprolate/cli.hpp"

int main(int argc, char** argv)
{
    return sechprolate::run_cli(argc, argv);
}
