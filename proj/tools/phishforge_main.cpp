#include <string>
#include <vector>

#include "phishforge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return phishforge::cli::run(args);
}
