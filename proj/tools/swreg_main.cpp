#include <vector>

#include "swreg/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return swreg::run_cli(args);
}
