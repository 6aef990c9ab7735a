#include "lbc/cli/run.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return lbc::cli::run(args);
}
