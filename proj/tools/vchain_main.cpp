#include <string>
#include <vector>

#include "vchain/cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return vchain::cli::run(args);
}
