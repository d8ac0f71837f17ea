#include <vector>

#include "finop/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return finop::cli::run(std::move(args));
}
