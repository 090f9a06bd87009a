#include "runner.hpp"

int main(int argc, char** argv)
{
    return bphi::cli::main_entry(argc, argv);
}
